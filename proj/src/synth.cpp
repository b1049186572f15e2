#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace satcs {

GroundTruth generate_signal(int n, int k, std::mt19937_64& rng) {
  if (n < 1 || k < 1 || k > n)
    throw std::invalid_argument("generate_signal: need 1 <= k <= n");
  // Partial Fisher-Yates draw of k distinct positions.
  std::vector<int> pool(static_cast<size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
  }
  GroundTruth gt;
  gt.support.assign(pool.begin(), pool.begin() + k);
  std::sort(gt.support.begin(), gt.support.end());
  gt.sparsity_k = k;
  gt.x_bar = Eigen::VectorXd::Zero(n);
  for (int idx : gt.support) gt.x_bar[idx] = standard_normal(rng);
  double nrm = gt.x_bar.norm();
  if (nrm == 0.0) {
    gt.x_bar[gt.support[0]] = 1.0;  // measure-zero fallback
    nrm = 1.0;
  }
  gt.x_bar /= nrm;
  return gt;
}

Eigen::MatrixXd generate_sensing_matrix(int m, int n, std::mt19937_64& rng) {
  if (m < 1 || n < 1) throw std::invalid_argument("generate_sensing_matrix: need m, n >= 1");
  Eigen::MatrixXd phi(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) phi(i, j) = standard_normal(rng);
  return phi;
}

Eigen::VectorXd add_noise(const Eigen::VectorXd& clean, double noise_level,
                          NoiseConvention convention, std::mt19937_64& rng) {
  if (!(noise_level > 0.0) || !std::isfinite(noise_level))
    throw std::invalid_argument("add_noise: noise_level must be positive and finite");
  if (clean.size() < 2)
    throw std::invalid_argument("add_noise: need at least two measurements");
  const double mean = clean.mean();
  const double var =
      (clean.array() - mean).square().sum() / static_cast<double>(clean.size() - 1);
  const double noise_var =
      convention == NoiseConvention::kSnr ? var / noise_level : var * noise_level;
  const double sd = std::sqrt(noise_var);
  Eigen::VectorXd out(clean.size());
  for (Eigen::Index i = 0; i < clean.size(); ++i)
    out[i] = clean[i] + sd * standard_normal(rng);
  return out;
}

Thresholds compute_thresholds(const Eigen::VectorXd& noisy, int m2) {
  const auto m = noisy.size();
  if (m2 < 0 || m2 >= m)
    throw std::invalid_argument("compute_thresholds: need 0 <= m2 < M");
  std::vector<double> mag(static_cast<size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) mag[static_cast<size_t>(i)] = std::abs(noisy[i]);
  std::sort(mag.begin(), mag.end(), std::greater<>());
  if (m2 == 0) {
    const double top = mag[0];
    const double t = top > 0.0 ? top * (1.0 + 1e-6) : 1e-6;
    return {-t, t, false};
  }
  const double a = mag[static_cast<size_t>(m2 - 1)];
  const double b = mag[static_cast<size_t>(m2)];
  if (a == b) {
    if (a <= 0.0)
      throw std::invalid_argument("compute_thresholds: zero magnitudes at the cut");
    return {-a, a, true};
  }
  double t = 0.5 * (a + b);
  if (t <= b) t = a;  // adjacent doubles; keep the saturated count exact
  return {-t, t, false};
}

SynthResult synthesize(const ExperimentSpec& spec, std::uint64_t trial_index) {
  spec.validate();
  auto rng_signal = make_stream(spec.seed, trial_index, Stream::kSignal);
  auto rng_matrix = make_stream(spec.seed, trial_index, Stream::kMatrix);
  auto rng_noise = make_stream(spec.seed, trial_index, Stream::kNoise);

  SynthResult out;
  out.truth = generate_signal(spec.n, spec.k, rng_signal);
  Eigen::MatrixXd phi = generate_sensing_matrix(spec.m, spec.n, rng_matrix);
  const Eigen::VectorXd clean = phi * out.truth.x_bar;
  const Eigen::VectorXd noisy =
      add_noise(clean, spec.noise_level, spec.noise_convention, rng_noise);
  const int m2 = static_cast<int>(std::llround(spec.saturation_ratio * spec.m));
  const Thresholds th = compute_thresholds(noisy, m2);

  if (!th.tie) {
    out.dataset =
        partition_measurements(phi, clip(noisy, th.y_min, th.y_max), th.y_min, th.y_max);
    return out;
  }

  // Duplicate magnitudes straddle the cut. Saturate the first m2 rows in
  // (magnitude desc, index asc) order; nudge losing ties one ulp inward so
  // the saturated count stays exact and y1 stays strictly interior.
  out.tie_broken = true;
  const Eigen::Index m = noisy.size();
  std::vector<int> order(static_cast<size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return std::abs(noisy[i]) > std::abs(noisy[j]);
  });
  std::vector<char> saturated(static_cast<size_t>(m), 0);
  for (int r = 0; r < m2; ++r) saturated[static_cast<size_t>(order[static_cast<size_t>(r)])] = 1;
  const double t = th.y_max;
  const double inner = std::nextafter(t, 0.0);
  Eigen::VectorXd y = noisy;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (saturated[static_cast<size_t>(i)]) {
      y[i] = noisy[i] >= 0.0 ? t : -t;
    } else if (std::abs(y[i]) >= t) {
      y[i] = noisy[i] >= 0.0 ? inner : -inner;
    }
  }
  out.dataset = partition_measurements(phi, y, th.y_min, th.y_max);
  return out;
}

}  // namespace satcs
