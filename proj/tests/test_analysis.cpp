#include <cmath>

#include "analysis.hpp"
#include "doctest.h"
#include "rng.hpp"
#include "synth.hpp"

using Eigen::VectorXd;

namespace {

double normal_pdf(double t) {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
}

}  // namespace

TEST_CASE("snr follows its formula and caps at 300 dB") {
  VectorXd x(3), y(3);
  x << 1.0, 0.0, 0.0;
  y << 0.9, 0.0, 0.0;
  CHECK(satcs::snr(x, y) ==
        doctest::Approx(10.0 * std::log10(1.0 / 0.01)).epsilon(1e-12));
  CHECK(satcs::snr(x, x) == 300.0);
  VectorXd wrong(2);
  wrong << 1.0, 0.0;
  CHECK_THROWS(satcs::snr(x, wrong));
  VectorXd zero = VectorXd::Zero(3);
  CHECK_THROWS(satcs::snr(zero, y));
}

TEST_CASE("angular error spans the expected range") {
  VectorXd x(2), same(2), opposite(2), orthogonal(2), zero(2);
  x << 1.0, 0.0;
  same << 2.0, 0.0;
  opposite << -3.0, 0.0;
  orthogonal << 0.0, 1.0;
  zero.setZero();

  CHECK(satcs::angular_error(x, same) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(satcs::angular_error(x, opposite) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(satcs::angular_error(x, orthogonal) == doctest::Approx(0.5).epsilon(1e-12));

  bool degenerate = false;
  CHECK(satcs::angular_error(x, zero, &degenerate) == 0.5);
  CHECK(degenerate);
}

TEST_CASE("nonzero counting respects the tolerance") {
  VectorXd x(4);
  x << 1.0, 1e-9, -1e-7, 0.0;
  CHECK(satcs::nnz(x) == 2);
  CHECK(satcs::nnz(x, 1e-10) == 3);
}

TEST_CASE("metrics bundle is consistent") {
  auto rng = satcs::make_stream(50, 0, satcs::Stream::kSignal);
  const auto gt = satcs::generate_signal(20, 4, rng);
  VectorXd est = gt.x_bar * 0.9;
  const auto m = satcs::compute_metrics(gt.x_bar, est);
  CHECK(m.snr_db == doctest::Approx(satcs::snr(gt.x_bar, est)));
  CHECK(m.l2_error == doctest::Approx((gt.x_bar - est).norm()));
  CHECK(m.nnz == 4);
  CHECK(!m.degenerate);
}

TEST_CASE("channel gain quadrature matches the closed form") {
  // E[eta(g) g] = 2 phi(t) for the symmetric hard-threshold channel.
  for (double t : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    CHECK(satcs::lambda_numeric(t) ==
          doctest::Approx(2.0 * normal_pdf(t)).epsilon(1e-9));
  }
  CHECK(satcs::lambda_numeric(0.0) ==
        doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-10));
  CHECK(satcs::lambda_numeric(12.0) == 0.0);
}

TEST_CASE("monte carlo gain estimate brackets the quadrature value") {
  auto srng = satcs::make_stream(51, 0, satcs::Stream::kSignal);
  const auto gt = satcs::generate_signal(20, 5, srng);

  for (double t : {0.0, 1.0}) {
    auto rng = satcs::make_stream(51, 0, satcs::Stream::kLambda);
    const auto est = satcs::estimate_lambda(t, gt.x_bar, 20000, rng);
    CHECK(est.std_err > 0.0);
    CHECK(std::abs(est.lambda_hat - satcs::lambda_numeric(t)) <= 4.0 * est.std_err);
  }

  auto rng = satcs::make_stream(51, 0, satcs::Stream::kLambda);
  const double dev = satcs::lemma1_vector_check(1.0, gt.x_bar, 20000, rng);
  CHECK(dev <= 5.0 / std::sqrt(20000.0));

  auto rng2 = satcs::make_stream(51, 0, satcs::Stream::kLambda);
  VectorXd not_unit = gt.x_bar * 2.0;
  CHECK_THROWS(satcs::estimate_lambda(0.0, not_unit, 20000, rng2));
  CHECK_THROWS(satcs::estimate_lambda(0.0, gt.x_bar, 10, rng2));
}

TEST_CASE("recovery bounds reproduce hand-checked plug-ins") {
  satcs::TheoremInputs in;
  in.p = 1.0;
  in.nu = 1.0;
  in.k = 1;
  in.gamma = 3.0;
  in.lambda = 1.0;
  in.m1 = 1;
  in.m2 = 1;
  in.epsilon = 0.0;
  in.sigma = 3.0;  // max(epsilon/m1, gamma/m2)
  in.validate();
  CHECK(satcs::theorem1_bound(satcs::BoundKind::kL1, in) == doctest::Approx(1.0));

  in.gamma = 4.0;
  in.sigma = 4.0;
  CHECK(satcs::theorem1_bound(satcs::BoundKind::kL0, in) == doctest::Approx(1.0));
}

TEST_CASE("bound inputs are validated") {
  satcs::TheoremInputs in;
  in.p = 1.0;
  in.nu = 1.0;
  in.k = 1;
  in.gamma = 2.0;
  in.lambda = 1.0;
  in.m1 = 1;
  in.m2 = 1;
  in.sigma = 1.0;  // inconsistent with max(epsilon/m1, gamma/m2) = 2.0
  CHECK_THROWS(in.validate());

  in.sigma = 2.0;
  in.validate();
  in.gamma = 0.0;
  in.sigma = 0.0;
  CHECK_THROWS(satcs::theorem1_bound(satcs::BoundKind::kL1, in));
  in.gamma = 2.0;
  in.sigma = 2.0;
  in.lambda = 0.0;
  CHECK_THROWS(satcs::theorem1_bound(satcs::BoundKind::kL1, in));
}

TEST_CASE("bound scaling in sparsity and trade-off strength") {
  satcs::TheoremInputs base;
  base.p = 0.9;
  base.nu = 0.4;
  base.k = 25;
  base.gamma = 0.5;
  base.lambda = 0.7;
  base.m1 = 100;
  base.m2 = 50;
  base.epsilon = 0.0;
  base.sigma = base.gamma / base.m2;

  auto doubled_k = base;
  doubled_k.k = 50;
  for (auto kind : {satcs::BoundKind::kL1, satcs::BoundKind::kL0}) {
    const double b1 = satcs::theorem1_bound(kind, base);
    const double b2 = satcs::theorem1_bound(kind, doubled_k);
    CHECK(b2 == doctest::Approx(b1 * std::sqrt(2.0)).epsilon(1e-12));
  }

  auto bigger_gamma = base;
  bigger_gamma.gamma = 1.0;
  bigger_gamma.sigma = bigger_gamma.gamma / bigger_gamma.m2;
  for (auto kind : {satcs::BoundKind::kL1, satcs::BoundKind::kL0}) {
    CHECK(satcs::theorem1_bound(kind, bigger_gamma) <
          satcs::theorem1_bound(kind, base));
  }
}
