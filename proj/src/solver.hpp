#pragma once

#include <Eigen/Cholesky>
#include <functional>

#include "types.hpp"

namespace satcs {

// One-time factorization of (phi1' phi1 / m1 + rho I). Solves against any
// right-hand side; reusable across solves that share (phi1, rho). When
// m1 < n the m1 x m1 Woodbury system is factorized instead of the n x n one.
class XSystem {
 public:
  XSystem(const Eigen::MatrixXd& phi1, double rho);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  double rho() const { return rho_; }
  bool woodbury() const { return woodbury_; }

 private:
  Eigen::MatrixXd phi1_;  // kept only for the Woodbury apply
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double rho_ = 0.0;
  bool woodbury_ = false;
  Eigen::Index n_ = 0;
  Eigen::Index m1_ = 0;
};

/// x step: solve (phi1' phi1 / m1 + rho I) x = phi1' y1 / m1 - alpha + rho z.
Eigen::VectorXd x_update(const XSystem& system,
                         const Eigen::VectorXd& phi1t_y1_over_m1,
                         const Eigen::VectorXd& alpha, const Eigen::VectorXd& z,
                         double rho);

/// z step: ball-constrained prox at u = (linear_term + alpha + rho x) / rho.
Eigen::VectorXd z_update(const Penalty& penalty, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& alpha,
                         const Eigen::VectorXd& linear_term, double rho, double c);

using SolveObserver = std::function<void(const SolverState&)>;

/// Full objective: f(x) + ||phi1 x - y1||^2 / (2 m1) - (gamma/m2) s2'(phi2 x - y2).
double objective_m1bitcsl(const SaturatedDataset& ds, const Penalty& penalty,
                          double gamma, const Eigen::VectorXd& x);

RecoveryResult solve_m1bitcsl(const SaturatedDataset& ds, const Penalty& penalty,
                              const SolverConfig& config,
                              const SolveObserver& observer = {});

double lasso_objective(const Eigen::MatrixXd& phi1, const Eigen::VectorXd& y1,
                       double nu, const Eigen::VectorXd& x);

/// Stationarity residual of min nu||x||_1 + 0.5||phi1 x - y1||^2, inf norm.
double lasso_kkt_residual(const Eigen::MatrixXd& phi1, const Eigen::VectorXd& y1,
                          double nu, const Eigen::VectorXd& x);

/// Plain LASSO via the same ADMM machinery (no saturation term, no norm
/// ball). Beyond the residual tests, stopping requires the stationarity
/// residual to fall below max(1e-6, eps_abs). A prebuilt system matching
/// (phi1, rho) may be supplied to share the factorization across calls.
RecoveryResult solve_lasso(const Eigen::MatrixXd& phi1, const Eigen::VectorXd& y1,
                           double nu, const SolverConfig& config,
                           const XSystem* prebuilt = nullptr);

void write_trace_csv(const RecoveryResult& result, const std::string& path);

}  // namespace satcs
