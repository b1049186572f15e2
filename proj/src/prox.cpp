#include "prox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace satcs {

namespace {

double soft(double u, double t) {
  const double a = std::abs(u) - t;
  if (a <= 0.0) return 0.0;
  return u > 0.0 ? a : -a;
}

// MCP value scaled by 1/rho: g_{nu,b}(z)/rho written through nu_eff = nu/rho
// and b_eff = b*rho (note b_eff*nu_eff = b*nu, the knee location).
double mcp_value_scaled(double z, double nu_eff, double b_eff) {
  const double a = std::abs(z);
  const double knee = b_eff * nu_eff;
  if (a < knee) return nu_eff * a - a * a / (2.0 * b_eff);
  return 0.5 * b_eff * nu_eff * nu_eff;
}

void check_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw std::invalid_argument("prox: rho must be positive and finite");
}

void check_nu(double nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu))
    throw std::invalid_argument("prox: nu must be nonnegative and finite");
}

std::vector<int> order_by_abs_desc(const Eigen::VectorXd& u) {
  std::vector<int> order(static_cast<size_t>(u.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(u[a]) > std::abs(u[b]);
  });
  return order;
}

}  // namespace

double prox_l1_scalar(double u, double nu_eff) { return soft(u, nu_eff); }

double prox_l0_scalar(double u, double nu_eff) {
  const double t = std::sqrt(2.0 * nu_eff);
  return std::abs(u) > t ? u : 0.0;  // a tie keeps the zero
}

double prox_mcp_scalar(double u, double nu, double b, double rho) {
  const double nu_eff = nu / rho;
  const double b_eff = b * rho;
  const double a = std::abs(u);
  if (a == 0.0) return 0.0;
  // Candidates: zero, the firm-threshold stationary point (only meaningful
  // when b_eff > 1, clamped to the knee), and the flat-region identity point.
  double best_z = 0.0;
  double best_v = 0.5 * a * a;
  auto consider = [&](double z) {
    const double v = mcp_value_scaled(z, nu_eff, b_eff) + 0.5 * (z - a) * (z - a);
    if (v < best_v) {
      best_v = v;
      best_z = z;
    }
  };
  if (b_eff > 1.0 && a > nu_eff) {
    const double zf = std::min(b_eff * (a - nu_eff) / (b_eff - 1.0), b_eff * nu_eff);
    consider(zf);
  }
  consider(a);
  return u > 0.0 ? best_z : -best_z;
}

Eigen::VectorXd prox_sorted_l1(const Eigen::VectorXd& u, double nu,
                               const Eigen::VectorXd& weights, double rho) {
  check_rho(rho);
  check_nu(nu);
  const Eigen::Index n = u.size();
  if (weights.size() != n) throw DimensionError("prox_sorted_l1: weight length mismatch");
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (weights[i] < weights[i + 1])
      throw std::invalid_argument("prox_sorted_l1: weights must be nonincreasing");
  }
  if (n > 0 && weights[n - 1] < 0.0)
    throw std::invalid_argument("prox_sorted_l1: weights must be nonnegative");

  auto order = order_by_abs_desc(u);
  // Rank r (largest magnitude first) takes the r-th smallest weight.
  std::vector<double> w_asc(static_cast<size_t>(n));
  std::vector<double> mag(static_cast<size_t>(n));
  std::vector<double> out(static_cast<size_t>(n));
  for (Eigen::Index r = 0; r < n; ++r) {
    w_asc[static_cast<size_t>(r)] = weights[n - 1 - r];
    mag[static_cast<size_t>(r)] = std::abs(u[order[static_cast<size_t>(r)]]);
    out[static_cast<size_t>(r)] =
        std::max(mag[static_cast<size_t>(r)] - nu * w_asc[static_cast<size_t>(r)] / rho, 0.0);
  }
  // Re-pair adjacent ranks whose thresholded outputs came out inverted.
  for (Eigen::Index pass = 0; pass + 1 < n; ++pass) {
    bool changed = false;
    for (size_t r = 0; r + 1 < static_cast<size_t>(n); ++r) {
      if (out[r] < out[r + 1]) {
        std::swap(w_asc[r], w_asc[r + 1]);
        out[r] = std::max(mag[r] - nu * w_asc[r] / rho, 0.0);
        out[r + 1] = std::max(mag[r + 1] - nu * w_asc[r + 1] / rho, 0.0);
        changed = true;
      }
    }
    if (!changed) break;
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  for (size_t r = 0; r < static_cast<size_t>(n); ++r) {
    const double v = u[order[r]];
    z[order[r]] = v > 0.0 ? out[r] : -out[r];
  }
  return z;
}

Eigen::VectorXd prox_separable(const Penalty& penalty, const Eigen::VectorXd& u,
                               double rho) {
  check_rho(rho);
  check_nu(penalty.nu);
  const double nu_eff = penalty.nu / rho;
  Eigen::VectorXd z(u.size());
  switch (penalty.kind) {
    case PenaltyKind::kL1:
      for (Eigen::Index i = 0; i < u.size(); ++i) z[i] = soft(u[i], nu_eff);
      return z;
    case PenaltyKind::kL0:
      for (Eigen::Index i = 0; i < u.size(); ++i) z[i] = prox_l0_scalar(u[i], nu_eff);
      return z;
    case PenaltyKind::kMcp:
      if (!(penalty.mcp_b > 0.0))
        throw std::invalid_argument("prox: mcp_b must be positive");
      for (Eigen::Index i = 0; i < u.size(); ++i)
        z[i] = prox_mcp_scalar(u[i], penalty.nu, penalty.mcp_b, rho);
      return z;
    case PenaltyKind::kSortedL1:
      return prox_sorted_l1(u, penalty.nu, penalty.weights, rho);
  }
  throw std::invalid_argument("prox: unknown penalty kind");
}

Eigen::VectorXd project_l2_ball(const Eigen::VectorXd& v, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("project_l2_ball: radius must be positive");
  if (std::isinf(c)) return v;
  const double nrm = v.norm();
  if (nrm <= c) return v;
  return v * (c / nrm);
}

namespace {

// Exact constrained L0 prox: the optimal support is a prefix of the
// magnitude ordering, so scan support sizes with running prefix energy and
// keep the best objective (scaled by 1/rho). Ties keep the smaller support.
Eigen::VectorXd l0_ball_prefix(double nu, const Eigen::VectorXd& u, double rho,
                               double c) {
  const Eigen::Index n = u.size();
  auto order = order_by_abs_desc(u);
  const double total = u.squaredNorm();
  const double nu_eff = nu / rho;
  double best_obj = 0.5 * total;  // empty support
  Eigen::Index best_k = 0;
  double pref = 0.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    const double ui = u[order[static_cast<size_t>(k - 1)]];
    pref += ui * ui;
    const double r = std::sqrt(pref);
    const double excess = std::max(r - c, 0.0);
    const double obj = nu_eff * static_cast<double>(k) +
                       0.5 * (excess * excess + (total - pref));
    if (obj < best_obj) {
      best_obj = obj;
      best_k = k;
    }
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  if (best_k > 0) {
    double pe = 0.0;
    for (Eigen::Index j = 0; j < best_k; ++j) {
      const double ui = u[order[static_cast<size_t>(j)]];
      pe += ui * ui;
    }
    const double r = std::sqrt(pe);
    const double scale = r <= c ? 1.0 : c / r;
    for (Eigen::Index j = 0; j < best_k; ++j)
      z[order[static_cast<size_t>(j)]] = u[order[static_cast<size_t>(j)]] * scale;
  }
  return z;
}

double constrained_objective(const Penalty& penalty, const Eigen::VectorXd& z,
                             const Eigen::VectorXd& u, double rho) {
  return penalty.value(z) + 0.5 * rho * (z - u).squaredNorm();
}

}  // namespace

Eigen::VectorXd prox_ball_constrained(const Penalty& penalty,
                                      const Eigen::VectorXd& u, double rho,
                                      double c, double* theta_hint) {
  check_rho(rho);
  if (!(c > 0.0)) throw std::invalid_argument("prox_ball_constrained: radius must be positive");

  Eigen::VectorXd z0 = prox_separable(penalty, u, rho);
  if (std::isinf(c) || z0.norm() <= c) return z0;

  if (penalty.kind == PenaltyKind::kL1) return project_l2_ball(z0, c);
  if (penalty.kind == PenaltyKind::kL0) return l0_ball_prefix(penalty.nu, u, rho, c);

  // Nonconvex cases: solve the prox with an augmented quadratic coefficient
  // rho + theta and target u*rho/(rho+theta), bisecting theta until the
  // output lands on the sphere.
  auto z_of = [&](double theta) {
    return prox_separable(penalty, u * (rho / (rho + theta)), rho + theta);
  };

  double lo = 0.0;  // infeasible side
  double hi = (theta_hint != nullptr && *theta_hint > 0.0) ? *theta_hint : 1.0;
  if (theta_hint != nullptr && *theta_hint > 0.0) {
    const double probe = 0.5 * *theta_hint;
    if (z_of(probe).norm() > c) lo = probe;
  }
  Eigen::VectorXd z_hi = z_of(hi);
  for (int guard = 0; z_hi.norm() > c && guard < 200; ++guard) {
    lo = hi;
    hi *= 2.0;
    z_hi = z_of(hi);
  }
  Eigen::VectorXd feasible = z_hi;  // closest feasible point seen
  double mid = hi;
  for (int it = 0; it < 100; ++it) {
    mid = 0.5 * (lo + hi);
    Eigen::VectorXd zm = z_of(mid);
    const double nrm = zm.norm();
    if (nrm > c) {
      lo = mid;
    } else {
      hi = mid;
      feasible = std::move(zm);
      if (c - nrm <= 1e-10) break;
    }
  }
  if (theta_hint != nullptr) *theta_hint = hi;

  Eigen::VectorXd best = feasible.norm() <= c ? feasible : project_l2_ball(feasible, c);
  double best_obj = constrained_objective(penalty, best, u, rho);
  auto consider = [&](Eigen::VectorXd cand) {
    const double obj = constrained_objective(penalty, cand, u, rho);
    if (obj < best_obj) {
      best_obj = obj;
      best = std::move(cand);
    }
  };
  consider(project_l2_ball(z0, c));
  consider(project_l2_ball(z_of(lo), c));
  return best;
}

// ---- Penalty ----

Penalty Penalty::l1(double nu) {
  Penalty p;
  p.kind = PenaltyKind::kL1;
  p.nu = nu;
  p.validate(0);
  return p;
}

Penalty Penalty::l0(double nu) {
  Penalty p;
  p.kind = PenaltyKind::kL0;
  p.nu = nu;
  p.validate(0);
  return p;
}

Penalty Penalty::mcp(double nu, double b) {
  Penalty p;
  p.kind = PenaltyKind::kMcp;
  p.nu = nu;
  p.mcp_b = b;
  p.validate(0);
  return p;
}

Penalty Penalty::sorted_l1(double nu, Eigen::VectorXd weights) {
  Penalty p;
  p.kind = PenaltyKind::kSortedL1;
  p.nu = nu;
  p.weights = std::move(weights);
  p.validate(p.weights.size());
  return p;
}

void Penalty::validate(Eigen::Index n) const {
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw std::invalid_argument("penalty: nu must be positive and finite");
  if (kind == PenaltyKind::kMcp && (!(mcp_b > 0.0) || !std::isfinite(mcp_b)))
    throw std::invalid_argument("penalty: mcp_b must be positive and finite");
  if (kind == PenaltyKind::kSortedL1) {
    if (n > 0 && weights.size() != n)
      throw DimensionError("penalty: weight length must match dimension");
    for (Eigen::Index i = 0; i + 1 < weights.size(); ++i) {
      if (weights[i] < weights[i + 1])
        throw std::invalid_argument("penalty: weights must be nonincreasing");
    }
    if (weights.size() > 0 && weights[weights.size() - 1] < 0.0)
      throw std::invalid_argument("penalty: weights must be nonnegative");
  }
}

double Penalty::value(const Eigen::VectorXd& x) const {
  switch (kind) {
    case PenaltyKind::kL1:
      return nu * x.lpNorm<1>();
    case PenaltyKind::kL0: {
      Eigen::Index count = 0;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] != 0.0) ++count;
      return nu * static_cast<double>(count);
    }
    case PenaltyKind::kMcp: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        s += mcp_value_scaled(x[i], nu, mcp_b);  // rho = 1 recovers g itself
      return s;
    }
    case PenaltyKind::kSortedL1: {
      if (weights.size() != x.size())
        throw DimensionError("penalty value: weight length mismatch");
      std::vector<double> mag(static_cast<size_t>(x.size()));
      for (Eigen::Index i = 0; i < x.size(); ++i) mag[static_cast<size_t>(i)] = std::abs(x[i]);
      std::sort(mag.begin(), mag.end());  // ascending, pairs with w_1 >= ... >= w_n
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) s += weights[i] * mag[static_cast<size_t>(i)];
      return nu * s;
    }
  }
  throw std::invalid_argument("penalty value: unknown kind");
}

}  // namespace satcs
