#include <cmath>

#include "doctest.h"
#include "model.hpp"
#include "rng.hpp"
#include "synth.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("generated signals are unit norm and exactly k-sparse") {
  for (int k : {1, 7, 30}) {
    auto rng = satcs::make_stream(40, 0, satcs::Stream::kSignal);
    const auto gt = satcs::generate_signal(30, k, rng);
    gt.validate();
    CHECK(gt.sparsity_k == k);
    CHECK(static_cast<int>(gt.support.size()) == k);
    CHECK(gt.x_bar.norm() == doctest::Approx(1.0).epsilon(1e-12));
    int nonzeros = 0;
    for (int i = 0; i < 30; ++i)
      if (gt.x_bar[i] != 0.0) ++nonzeros;
    CHECK(nonzeros == k);
    CHECK(std::is_sorted(gt.support.begin(), gt.support.end()));
  }
  auto rng = satcs::make_stream(40, 0, satcs::Stream::kSignal);
  CHECK_THROWS_AS(satcs::generate_signal(10, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(satcs::generate_signal(10, 11, rng), std::invalid_argument);
}

TEST_CASE("sensing matrices look standard normal") {
  auto rng = satcs::make_stream(41, 0, satcs::Stream::kMatrix);
  const MatrixXd phi = satcs::generate_sensing_matrix(200, 100, rng);
  CHECK(phi.rows() == 200);
  CHECK(phi.cols() == 100);
  const double mean = phi.mean();
  const double var = (phi.array() - mean).square().sum() / (phi.size() - 1);
  CHECK(std::abs(mean) < 0.05);
  CHECK(var == doctest::Approx(1.0).epsilon(0.1));

  auto rng2 = satcs::make_stream(41, 0, satcs::Stream::kMatrix);
  const MatrixXd again = satcs::generate_sensing_matrix(200, 100, rng2);
  CHECK(again == phi);
}

TEST_CASE("noise level follows the chosen convention") {
  auto rng = satcs::make_stream(42, 0, satcs::Stream::kNoise);
  VectorXd clean(4000);
  for (int i = 0; i < clean.size(); ++i)
    clean[i] = 3.0 * (2.0 * satcs::uniform01(rng) - 1.0);
  const double clean_var =
      (clean.array() - clean.mean()).square().sum() / (clean.size() - 1);

  const VectorXd noisy_snr =
      satcs::add_noise(clean, 10.0, satcs::NoiseConvention::kSnr, rng);
  const VectorXd noise = noisy_snr - clean;
  const double noise_var =
      (noise.array() - noise.mean()).square().sum() / (noise.size() - 1);
  CHECK(noise_var == doctest::Approx(clean_var / 10.0).epsilon(0.15));

  const VectorXd noisy_nsr =
      satcs::add_noise(clean, 2.0, satcs::NoiseConvention::kNsr, rng);
  const VectorXd noise2 = noisy_nsr - clean;
  const double noise2_var =
      (noise2.array() - noise2.mean()).square().sum() / (noise2.size() - 1);
  CHECK(noise2_var == doctest::Approx(clean_var * 2.0).epsilon(0.15));
}

TEST_CASE("thresholds put exactly m2 magnitudes at or beyond the cut") {
  VectorXd v(6);
  v << 0.5, -3.0, 1.0, 2.0, -1.5, 0.25;

  SUBCASE("interior cut") {
    const auto t = satcs::compute_thresholds(v, 2);
    CHECK(!t.tie);
    CHECK(t.y_max == doctest::Approx(1.75));  // midpoint of 2.0 and 1.5
    CHECK(t.y_min == -t.y_max);
    int beyond = 0;
    for (int i = 0; i < 6; ++i)
      if (std::abs(v[i]) >= t.y_max) ++beyond;
    CHECK(beyond == 2);
  }

  SUBCASE("no saturation") {
    const auto t = satcs::compute_thresholds(v, 0);
    CHECK(t.y_max > 3.0);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(v[i]) < t.y_max);
  }

  SUBCASE("duplicate magnitudes straddling the cut") {
    VectorXd w(4);
    w << 1.0, -1.0, 0.5, 2.0;
    const auto t = satcs::compute_thresholds(w, 2);  // 2nd and 3rd largest tie
    CHECK(t.tie);
    CHECK(t.y_max == 1.0);
  }

  SUBCASE("adjacent floating-point magnitudes") {
    VectorXd w(3);
    const double a = 1.0;
    const double b = std::nextafter(a, 0.0);
    w << a, b, 0.1;
    const auto t = satcs::compute_thresholds(w, 1);
    CHECK(!t.tie);
    // The midpoint cannot be represented strictly between a and b; the cut
    // must still keep exactly one magnitude at or beyond it.
    int beyond = 0;
    for (int i = 0; i < 3; ++i)
      if (std::abs(w[i]) >= t.y_max) ++beyond;
    CHECK(beyond == 1);
  }
}

TEST_CASE("synthesis hits the requested saturation count exactly") {
  satcs::ExperimentSpec spec;
  spec.n = 50;
  spec.m = 40;
  spec.k = 5;
  spec.saturation_ratio = 0.25;
  spec.trials = 1;
  spec.seed = 7;
  for (uint64_t trial = 0; trial < 30; ++trial) {
    const auto r = satcs::synthesize(spec, trial);
    r.dataset.validate();
    r.truth.validate();
    CHECK(r.dataset.m2() == 10);
    CHECK(r.dataset.m() == 40);
    // Saturated values sit exactly at the clip levels with matching signs.
    for (Eigen::Index i = 0; i < r.dataset.m2(); ++i) {
      const double expected =
          r.dataset.s2[i] > 0 ? r.dataset.y_max : r.dataset.y_min;
      CHECK(r.dataset.y2[i] == expected);
    }
  }
}

TEST_CASE("zero saturation keeps every measurement") {
  satcs::ExperimentSpec spec;
  spec.n = 30;
  spec.m = 20;
  spec.k = 3;
  spec.saturation_ratio = 0.0;
  spec.seed = 8;
  const auto r = satcs::synthesize(spec, 0);
  CHECK(r.dataset.m2() == 0);
  CHECK(r.dataset.m1() == 20);
}

TEST_CASE("synthesis is deterministic and stream-isolated") {
  satcs::ExperimentSpec spec;
  spec.n = 40;
  spec.m = 30;
  spec.k = 4;
  spec.saturation_ratio = 0.2;
  spec.seed = 9;

  const auto a = satcs::synthesize(spec, 3);
  const auto b = satcs::synthesize(spec, 3);
  CHECK(a.truth.x_bar == b.truth.x_bar);
  CHECK(a.dataset.phi1 == b.dataset.phi1);
  CHECK(a.dataset.y1 == b.dataset.y1);
  CHECK(a.dataset.y_max == b.dataset.y_max);

  const auto other_trial = satcs::synthesize(spec, 4);
  CHECK(a.truth.x_bar != other_trial.truth.x_bar);

  // Changing only the noise level must not disturb the signal or matrix draw.
  auto spec2 = spec;
  spec2.noise_level = 100.0;
  const auto c = satcs::synthesize(spec2, 3);
  CHECK(c.truth.x_bar == a.truth.x_bar);

  auto spec3 = spec;
  spec3.seed = 10;
  const auto d = satcs::synthesize(spec3, 3);
  CHECK(d.truth.x_bar != a.truth.x_bar);
}

TEST_CASE("full measurement vector reconstructs in original order") {
  satcs::ExperimentSpec spec;
  spec.n = 30;
  spec.m = 24;
  spec.k = 3;
  spec.saturation_ratio = 0.25;
  spec.seed = 11;
  const auto r = satcs::synthesize(spec, 0);
  const VectorXd full = satcs::reconstruct_clipped(r.dataset);
  CHECK(full.size() == 24);
  // Every entry is either strictly interior or exactly at a clip level.
  for (int i = 0; i < 24; ++i) {
    const bool interior =
        full[i] > r.dataset.y_min && full[i] < r.dataset.y_max;
    const bool clipped =
        full[i] == r.dataset.y_min || full[i] == r.dataset.y_max;
    CHECK((interior || clipped));
  }
}
