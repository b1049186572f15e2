#include "analysis.hpp"

#include <cmath>

#include "rng.hpp"

namespace satcs {

double snr(const Eigen::VectorXd& x_bar, const Eigen::VectorXd& x_hat) {
  if (x_bar.size() != x_hat.size()) throw DimensionError("snr: length mismatch");
  const double ref = x_bar.norm();
  if (ref == 0.0) throw std::invalid_argument("snr: zero reference signal");
  const double err = (x_bar - x_hat).norm();
  if (err < 1e-15 * ref) return 300.0;
  return 10.0 * std::log10((ref * ref) / (err * err));
}

double angular_error(const Eigen::VectorXd& x_bar, const Eigen::VectorXd& x_hat,
                     bool* degenerate) {
  if (x_bar.size() != x_hat.size())
    throw DimensionError("angular_error: length mismatch");
  if (degenerate != nullptr) *degenerate = false;
  const double na = x_bar.norm();
  const double nb = x_hat.norm();
  if (na == 0.0 || nb == 0.0) {
    if (degenerate != nullptr) *degenerate = true;
    return 0.5;
  }
  double cosine = x_bar.dot(x_hat) / (na * nb);
  cosine = std::min(1.0, std::max(-1.0, cosine));
  return std::acos(cosine) / M_PI;
}

Eigen::Index nnz(const Eigen::VectorXd& x, double tol) {
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > tol) ++count;
  return count;
}

MetricsRecord compute_metrics(const Eigen::VectorXd& x_bar,
                              const Eigen::VectorXd& x_hat) {
  MetricsRecord r;
  r.snr_db = snr(x_bar, x_hat);
  r.angular_error = angular_error(x_bar, x_hat, &r.degenerate);
  r.l2_error = (x_bar - x_hat).norm();
  r.nnz = static_cast<int>(nnz(x_hat));
  return r;
}

namespace {

double normal_pdf(double g) {
  return std::exp(-0.5 * g * g) * 0.39894228040143267794;  // 1/sqrt(2 pi)
}

double simpson_rule(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double fa, double b, double fb,
                        double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_rule(a, fa, m, fm, flm);
  const double right = simpson_rule(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  if (a >= b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson_rule(a, fa, b, fb, fm);
  return adaptive_simpson(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

}  // namespace

double lambda_numeric(double threshold_t) {
  if (!(threshold_t >= 0.0) || !std::isfinite(threshold_t))
    throw std::invalid_argument("lambda_numeric: threshold must be >= 0 and finite");
  const double hi = 10.0;
  if (threshold_t >= hi) return 0.0;
  auto pos = [](double g) { return g * normal_pdf(g); };
  auto neg = [](double g) { return -g * normal_pdf(g); };
  // eta vanishes on (-t, t); integrate the two active tails separately.
  return integrate(neg, -hi, -threshold_t, 0.5e-10) +
         integrate(pos, threshold_t, hi, 0.5e-10);
}

namespace {

struct LambdaSample {
  double lambda_hat = 0.0;
  double std_err = 0.0;
  double max_dev = 0.0;
};

LambdaSample sample_lambda(double t, const Eigen::VectorXd& x_bar, long samples,
                           std::mt19937_64& rng) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("estimate_lambda: threshold must be >= 0 and finite");
  if (std::abs(x_bar.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("estimate_lambda: x_bar must have unit norm");
  if (samples < 1000)
    throw std::invalid_argument("estimate_lambda: need at least 1000 samples");
  const Eigen::Index n = x_bar.size();
  Eigen::VectorXd phi(n);
  Eigen::VectorXd mean_vec = Eigen::VectorXd::Zero(n);
  double sum = 0.0, sumsq = 0.0;
  for (long s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) phi[i] = standard_normal(rng);
    const double g = phi.dot(x_bar);
    const int sign = g >= t ? 1 : (g <= -t ? -1 : 0);
    const double v = sign * g;
    sum += v;
    sumsq += v * v;
    if (sign != 0) mean_vec += sign * phi;
  }
  LambdaSample out;
  out.lambda_hat = sum / static_cast<double>(samples);
  const double var = (sumsq - static_cast<double>(samples) * out.lambda_hat * out.lambda_hat) /
                     static_cast<double>(samples - 1);
  out.std_err = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
  mean_vec /= static_cast<double>(samples);
  out.max_dev = (mean_vec - out.lambda_hat * x_bar).lpNorm<Eigen::Infinity>();
  return out;
}

}  // namespace

LambdaEstimate estimate_lambda(double threshold_t, const Eigen::VectorXd& x_bar,
                               long samples, std::mt19937_64& rng) {
  const auto s = sample_lambda(threshold_t, x_bar, samples, rng);
  return {s.lambda_hat, s.std_err};
}

double lemma1_vector_check(double threshold_t, const Eigen::VectorXd& x_bar,
                           long samples, std::mt19937_64& rng) {
  return sample_lambda(threshold_t, x_bar, samples, rng).max_dev;
}

void TheoremInputs::validate() const {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("bound: p must lie in (0, 1]");
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw std::invalid_argument("bound: nu must be positive and finite");
  if (k < 0) throw std::invalid_argument("bound: k must be >= 0");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("bound: epsilon must be >= 0");
  if (!(t_conf >= 0.0)) throw std::invalid_argument("bound: t_conf must be >= 0");
  if (m1 < 1 || m2 < 1) throw std::invalid_argument("bound: need m1, m2 >= 1");
  const double expected =
      std::max(epsilon / static_cast<double>(m1), gamma / static_cast<double>(m2));
  if (std::abs(sigma - expected) > 1e-12 * std::max(1.0, std::abs(expected)))
    throw std::invalid_argument("bound: sigma != max(epsilon/m1, gamma/m2)");
}

double theorem1_bound(BoundKind kind, const TheoremInputs& inputs) {
  inputs.validate();
  if (!(inputs.gamma > 0.0))
    throw std::invalid_argument("bound: gamma must be positive");
  if (!(inputs.lambda > 0.0))
    throw std::invalid_argument("bound: lambda must be positive");
  const double k = static_cast<double>(inputs.k);
  if (kind == BoundKind::kL1)
    return 3.0 * inputs.p * inputs.nu * std::sqrt(k) / (inputs.gamma * inputs.lambda);
  return std::sqrt(4.0 * inputs.p * inputs.nu * k / (inputs.gamma * inputs.lambda));
}

}  // namespace satcs
