#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {
namespace {

constexpr double kGridStep = 1e-3;
constexpr long long kGridLevels = 5000;  // grid points are {-5000..5000} * step

double mcp_scalar(double z, double nu, double b) {
  const double a = std::abs(z);
  if (a < b * nu) return nu * a - a * a / (2.0 * b);
  return 0.5 * b * nu * nu;
}

// Per-coordinate penalty under one weight assignment (sorted-L1 reduces to a
// weighted L1 once an assignment of weights to coordinates is fixed).
struct ScalarPenalty {
  satcs::PenaltyKind kind;
  double nu;
  double b;
};

double scalar_value(const ScalarPenalty& p, double z) {
  switch (p.kind) {
    case satcs::PenaltyKind::kL1: return p.nu * std::abs(z);
    case satcs::PenaltyKind::kL0: return z != 0.0 ? p.nu : 0.0;
    case satcs::PenaltyKind::kMcp: return mcp_scalar(z, p.nu, p.b);
    case satcs::PenaltyKind::kSortedL1: break;
  }
  throw std::logic_error("grid oracle: unassigned sorted-L1 weight");
}

// Minimum over a separable instance with no norm constraint: independent
// per-coordinate scans of the full signed grid.
double separable_grid_min_free(const std::vector<ScalarPenalty>& pens,
                               const Eigen::VectorXd& u, double rho) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (long long t = -kGridLevels; t <= kGridLevels; ++t) {
      const double z = static_cast<double>(t) * kGridStep;
      const double v =
          scalar_value(pens[static_cast<size_t>(i)], z) + 0.5 * rho * (z - u[i]) * (z - u[i]);
      best = std::min(best, v);
    }
    total += best;
  }
  return total;
}

// Minimum over grid points with sum of squares <= c^2. Works in integer
// magnitude levels: a point (s1 t1, s2 t2, ...) * step is feasible iff
// t1^2 + t2^2 + ... <= Q with Q = floor(c^2 / step^2). Each coordinate is
// reduced to best-value-per-magnitude (min over sign), and the last coordinate
// to a prefix-minimum over magnitudes, so the scan over the remaining
// coordinates resolves each radius budget in O(1).
double separable_grid_min_ball(const std::vector<ScalarPenalty>& pens,
                               const Eigen::VectorXd& u, double rho, double c) {
  const auto n = u.size();
  const long long q =
      static_cast<long long>(std::floor(c * c / (kGridStep * kGridStep) + 1e-9));
  long long t_cap = 0;
  while ((t_cap + 1) * (t_cap + 1) <= q && t_cap + 1 <= kGridLevels) ++t_cap;

  std::vector<std::vector<double>> gm(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& col = gm[static_cast<size_t>(i)];
    col.resize(static_cast<size_t>(t_cap) + 1);
    for (long long t = 0; t <= t_cap; ++t) {
      const double z = static_cast<double>(t) * kGridStep;
      const auto& p = pens[static_cast<size_t>(i)];
      double v = scalar_value(p, z) + 0.5 * rho * (z - u[i]) * (z - u[i]);
      if (t > 0) {
        const double w = scalar_value(p, -z) + 0.5 * rho * (-z - u[i]) * (-z - u[i]);
        v = std::min(v, w);
      }
      col[static_cast<size_t>(t)] = v;
    }
  }

  const auto prefix_min = [](std::vector<double> col) {
    for (size_t t = 1; t < col.size(); ++t) col[t] = std::min(col[t], col[t - 1]);
    return col;
  };

  double best = std::numeric_limits<double>::infinity();
  if (n == 1) {
    for (long long t = 0; t <= t_cap; ++t)
      best = std::min(best, gm[0][static_cast<size_t>(t)]);
  } else if (n == 2) {
    const std::vector<double> p2 = prefix_min(gm[1]);
    long long ptr = t_cap;
    for (long long t1 = 0; t1 <= t_cap; ++t1) {
      const long long rem = q - t1 * t1;
      while (ptr * ptr > rem) --ptr;
      best = std::min(best, gm[0][static_cast<size_t>(t1)] +
                                p2[static_cast<size_t>(ptr)]);
    }
  } else if (n == 3) {
    const std::vector<double> p3 = prefix_min(gm[2]);
    long long start2 = t_cap;
    for (long long t1 = 0; t1 <= t_cap; ++t1) {
      const long long rem1 = q - t1 * t1;
      while (start2 * start2 > rem1) --start2;
      long long ptr3 = start2;
      const double g1 = gm[0][static_cast<size_t>(t1)];
      for (long long t2 = 0; t2 <= start2; ++t2) {
        const long long rem2 = rem1 - t2 * t2;
        while (ptr3 * ptr3 > rem2) --ptr3;
        best = std::min(best, g1 + gm[1][static_cast<size_t>(t2)] +
                                  p3[static_cast<size_t>(ptr3)]);
      }
    }
  } else {
    throw std::invalid_argument("grid oracle: ball search supports n <= 3");
  }
  return best;
}

double separable_grid_min(const std::vector<ScalarPenalty>& pens,
                          const Eigen::VectorXd& u, double rho, double c) {
  if (std::isinf(c)) return separable_grid_min_free(pens, u, rho);
  return separable_grid_min_ball(pens, u, rho, c);
}

}  // namespace

double penalty_value(const satcs::Penalty& penalty, const Eigen::VectorXd& x) {
  switch (penalty.kind) {
    case satcs::PenaltyKind::kL1:
      return penalty.nu * x.lpNorm<1>();
    case satcs::PenaltyKind::kL0: {
      int cnt = 0;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] != 0.0) ++cnt;
      return penalty.nu * cnt;
    }
    case satcs::PenaltyKind::kMcp: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        s += mcp_scalar(x[i], penalty.nu, penalty.mcp_b);
      return s;
    }
    case satcs::PenaltyKind::kSortedL1: {
      if (penalty.weights.size() != x.size())
        throw std::invalid_argument("oracle: weight length mismatch");
      std::vector<double> mags(x.data(), x.data() + x.size());
      for (auto& m : mags) m = std::abs(m);
      std::sort(mags.begin(), mags.end());  // ascending, paired with weights as given
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        s += penalty.weights[i] * mags[static_cast<size_t>(i)];
      return penalty.nu * s;
    }
  }
  throw std::logic_error("oracle: unknown penalty kind");
}

double prox_objective(const satcs::Penalty& penalty, const Eigen::VectorXd& z,
                      const Eigen::VectorXd& u, double rho) {
  return penalty_value(penalty, z) + 0.5 * rho * (z - u).squaredNorm();
}

double grid_prox_min(const satcs::Penalty& penalty, const Eigen::VectorXd& u,
                     double rho, double ball_radius) {
  const auto n = u.size();
  if (n < 1 || n > 3) throw std::invalid_argument("grid oracle: n must be 1..3");

  if (penalty.kind != satcs::PenaltyKind::kSortedL1) {
    std::vector<ScalarPenalty> pens(
        static_cast<size_t>(n), ScalarPenalty{penalty.kind, penalty.nu, penalty.mcp_b});
    return separable_grid_min(pens, u, rho, ball_radius);
  }

  // Sorted L1: the penalty is the minimum over assignments of weights to
  // coordinates, so the global grid minimum is the minimum over permutations
  // of the weighted-L1 grid minima.
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    std::vector<ScalarPenalty> pens;
    pens.reserve(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
      pens.push_back(ScalarPenalty{satcs::PenaltyKind::kL1,
                                   penalty.nu * penalty.weights[perm[static_cast<size_t>(i)]],
                                   0.0});
    best = std::min(best, separable_grid_min(pens, u, rho, ball_radius));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double l0_ball_min_exhaustive(double nu, const Eigen::VectorXd& u, double rho,
                              double ball_radius) {
  const auto n = u.size();
  if (n < 0 || n > 24) throw std::invalid_argument("l0 oracle: n too large");
  double best = std::numeric_limits<double>::infinity();
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i)
      if (mask & (1u << i)) z[i] = u[i];
    const double nrm = z.norm();
    if (std::isfinite(ball_radius) && nrm > ball_radius) z *= ball_radius / nrm;
    int realized = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (z[i] != 0.0) ++realized;
    const double obj = nu * realized + 0.5 * rho * (z - u).squaredNorm();
    best = std::min(best, obj);
  }
  return best;
}

Eigen::VectorXd fista_lasso(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                            double nu, int max_iter) {
  const auto n = phi.cols();
  const Eigen::MatrixXd gram = phi.transpose() * phi;
  const Eigen::VectorXd b = phi.transpose() * y;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double lip = std::max(eig.eigenvalues().maxCoeff(), 1e-12);

  const auto soft = [&](const Eigen::VectorXd& v, double thr) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double a = std::abs(v[i]) - thr;
      out[i] = a > 0.0 ? (v[i] > 0.0 ? a : -a) : 0.0;
    }
    return out;
  };
  const auto stationarity = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd g = gram * x - b;
    double r = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double ri;
      if (x[i] > 0.0) ri = std::abs(g[i] + nu);
      else if (x[i] < 0.0) ri = std::abs(g[i] - nu);
      else ri = std::max(std::abs(g[i]) - nu, 0.0);
      r = std::max(r, ri);
    }
    return r;
  };

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = x;
  double momentum = 1.0;
  const double tol = 1e-13 * std::max(1.0, b.lpNorm<Eigen::Infinity>());
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd x_new = soft(z - (gram * z - b) / lip, nu / lip);
    const double momentum_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    // adaptive restart on a momentum-direction sign test
    if ((z - x_new).dot(x_new - x) > 0.0) {
      z = x_new;
      momentum = 1.0;
    } else {
      z = x_new + ((momentum - 1.0) / momentum_new) * (x_new - x);
      momentum = momentum_new;
    }
    x = x_new;
    if (it % 50 == 49 && stationarity(x) <= tol) break;
  }
  return x;
}

double lasso_objective(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                       double nu, const Eigen::VectorXd& x) {
  return nu * x.lpNorm<1>() + 0.5 * (phi * x - y).squaredNorm();
}

}  // namespace oracle
