#include "solver.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>

#include "csv.hpp"
#include "prox.hpp"

namespace satcs {

void SolverConfig::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("config: gamma must be finite and >= 0");
  if (!(ball_radius > 0.0))
    throw std::invalid_argument("config: ball_radius must be positive");
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw std::invalid_argument("config: rho must be positive and finite");
  if (!(eps_abs > 0.0) || !(eps_rel > 0.0))
    throw std::invalid_argument("config: tolerances must be positive");
  if (max_iter < 1) throw std::invalid_argument("config: max_iter must be >= 1");
}

XSystem::XSystem(const Eigen::MatrixXd& phi1, double rho)
    : rho_(rho), n_(phi1.cols()), m1_(phi1.rows()) {
  if (!(rho > 0.0) || !std::isfinite(rho))
    throw std::invalid_argument("x system: rho must be positive and finite");
  if (!phi1.allFinite())
    throw std::invalid_argument("x system: non-finite sensing entries");
  woodbury_ = m1_ > 0 && m1_ < n_;
  if (m1_ == 0) return;  // operator is rho * I
  if (woodbury_) {
    phi1_ = phi1;
    Eigen::MatrixXd small = phi1 * phi1.transpose();
    small.diagonal().array() += rho * static_cast<double>(m1_);
    llt_.compute(small);
  } else {
    Eigen::MatrixXd big = (phi1.transpose() * phi1) / static_cast<double>(m1_);
    big.diagonal().array() += rho;
    llt_.compute(big);
  }
  if (llt_.info() != Eigen::Success)
    throw std::runtime_error("x system: factorization failed");
}

Eigen::VectorXd XSystem::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != n_) throw DimensionError("x system: rhs length mismatch");
  if (m1_ == 0) return rhs / rho_;
  if (woodbury_) {
    // (A'A/m + rho I)^-1 r = (r - A'(rho m I + A A')^-1 A r) / rho
    Eigen::VectorXd t = llt_.solve(phi1_ * rhs);
    return (rhs - phi1_.transpose() * t) / rho_;
  }
  return llt_.solve(rhs);
}

Eigen::VectorXd x_update(const XSystem& system,
                         const Eigen::VectorXd& phi1t_y1_over_m1,
                         const Eigen::VectorXd& alpha, const Eigen::VectorXd& z,
                         double rho) {
  if (alpha.size() != z.size() || phi1t_y1_over_m1.size() != z.size())
    throw DimensionError("x_update: operand length mismatch");
  if (system.rho() != rho)
    throw std::invalid_argument("x_update: rho differs from the factorization");
  return system.solve(phi1t_y1_over_m1 - alpha + rho * z);
}

Eigen::VectorXd z_update(const Penalty& penalty, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& alpha,
                         const Eigen::VectorXd& linear_term, double rho, double c) {
  if (alpha.size() != x.size() || linear_term.size() != x.size())
    throw DimensionError("z_update: operand length mismatch");
  if (!(rho > 0.0)) throw std::invalid_argument("z_update: rho must be positive");
  Eigen::VectorXd u = (linear_term + alpha + rho * x) / rho;
  return prox_ball_constrained(penalty, u, rho, c);
}

double objective_m1bitcsl(const SaturatedDataset& ds, const Penalty& penalty,
                          double gamma, const Eigen::VectorXd& x) {
  if (x.size() != ds.n()) throw DimensionError("objective: x length mismatch");
  double obj = penalty.value(x);
  if (ds.m1() > 0)
    obj += (ds.phi1 * x - ds.y1).squaredNorm() / (2.0 * static_cast<double>(ds.m1()));
  if (gamma != 0.0 && ds.m2() > 0)
    obj -= (gamma / static_cast<double>(ds.m2())) *
           ds.s2.cast<double>().dot(ds.phi2 * x - ds.y2);
  return obj;
}

double lasso_objective(const Eigen::MatrixXd& phi1, const Eigen::VectorXd& y1,
                       double nu, const Eigen::VectorXd& x) {
  return nu * x.lpNorm<1>() + 0.5 * (phi1 * x - y1).squaredNorm();
}

double lasso_kkt_residual(const Eigen::MatrixXd& phi1, const Eigen::VectorXd& y1,
                          double nu, const Eigen::VectorXd& x) {
  Eigen::VectorXd g = phi1.transpose() * (phi1 * x - y1);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double r;
    if (x[i] > 0.0)
      r = std::abs(g[i] + nu);
    else if (x[i] < 0.0)
      r = std::abs(g[i] - nu);
    else
      r = std::max(std::abs(g[i]) - nu, 0.0);
    worst = std::max(worst, r);
  }
  return worst;
}

namespace {

struct AdmmProblem {
  const Eigen::MatrixXd* phi1 = nullptr;
  Eigen::VectorXd phi1t_y1_over_m1;
  Eigen::VectorXd linear_term;
  const Penalty* penalty = nullptr;
  double ball_radius = kUnboundedRadius;
  std::function<double(const Eigen::VectorXd&)> objective;
  std::function<bool(const Eigen::VectorXd&)> extra_stop;  // checked once residuals pass
};

RecoveryResult run_admm(const AdmmProblem& p, const SolverConfig& config,
                        const SolveObserver& observer, const XSystem* prebuilt) {
  const Eigen::Index n = p.phi1t_y1_over_m1.size();
  double rho = config.rho;
  std::unique_ptr<XSystem> owned;
  const XSystem* system = nullptr;
  if (prebuilt != nullptr && prebuilt->rho() == rho) {
    system = prebuilt;
  } else {
    owned = std::make_unique<XSystem>(*p.phi1, rho);
    system = owned.get();
  }

  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd x(n), z_prev(n);
  RecoveryResult out;
  out.residual_history.reserve(static_cast<size_t>(std::min(config.max_iter, 4096)));
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  double theta_warm = 0.0;
  const auto t0 = std::chrono::steady_clock::now();

  for (int it = 1; it <= config.max_iter; ++it) {
    x = system->solve(p.phi1t_y1_over_m1 - alpha + rho * z);
    z_prev.swap(z);
    Eigen::VectorXd u = (p.linear_term + alpha + rho * x) / rho;
    z = prox_ball_constrained(*p.penalty, u, rho, p.ball_radius, &theta_warm);
    alpha += rho * (x - z);

    const double primal = (x - z).norm();
    const double dual = rho * (z - z_prev).norm();
    if (!std::isfinite(primal) || !std::isfinite(dual))
      throw DivergenceError("admm: non-finite iterate at iteration " + std::to_string(it), it);
    const double z_norm = z.norm();
    out.max_z_norm = std::max(out.max_z_norm, z_norm);

    IterationRecord rec{primal, dual, std::numeric_limits<double>::quiet_NaN()};
    if (config.record_objective) rec.objective = p.objective(z);
    out.residual_history.push_back(rec);
    if (observer) observer(SolverState{x, z, alpha, it, primal, dual});

    const double eps_pri = config.eps_abs * sqrt_n + config.eps_rel * std::max(x.norm(), z_norm);
    const double eps_dual = config.eps_abs * sqrt_n + config.eps_rel * alpha.norm();
    if (primal <= eps_pri && dual <= eps_dual) {
      if (!p.extra_stop || p.extra_stop(z)) {
        out.converged = true;
        break;
      }
    }

    if (config.adaptive_rho && it % 25 == 0) {
      double next = rho;
      if (primal > 10.0 * dual)
        next = std::min(rho * 2.0, 1e6);
      else if (dual > 10.0 * primal)
        next = std::max(rho * 0.5, 1e-6);
      if (next != rho) {
        rho = next;
        owned = std::make_unique<XSystem>(*p.phi1, rho);
        system = owned.get();
      }
    }
  }

  out.iterations = static_cast<int>(out.residual_history.size());
  out.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.x_hat = std::move(z);
  out.final_objective = p.objective(out.x_hat);
  return out;
}

}  // namespace

RecoveryResult solve_m1bitcsl(const SaturatedDataset& ds, const Penalty& penalty,
                              const SolverConfig& config,
                              const SolveObserver& observer) {
  ds.validate();
  config.validate();
  penalty.validate(ds.n());
  const auto m1 = static_cast<double>(ds.m1());
  const auto m2 = static_cast<double>(ds.m2());

  AdmmProblem p;
  p.phi1 = &ds.phi1;
  p.phi1t_y1_over_m1 = ds.m1() > 0
                           ? Eigen::VectorXd((ds.phi1.transpose() * ds.y1) / m1)
                           : Eigen::VectorXd(Eigen::VectorXd::Zero(ds.n()));
  p.linear_term = (config.gamma != 0.0 && ds.m2() > 0)
                      ? Eigen::VectorXd((config.gamma / m2) *
                                        (ds.phi2.transpose() * ds.s2.cast<double>()))
                      : Eigen::VectorXd(Eigen::VectorXd::Zero(ds.n()));
  p.penalty = &penalty;
  p.ball_radius = config.ball_radius;
  p.objective = [&](const Eigen::VectorXd& v) {
    return objective_m1bitcsl(ds, penalty, config.gamma, v);
  };
  return run_admm(p, config, observer, nullptr);
}

RecoveryResult solve_lasso(const Eigen::MatrixXd& phi1, const Eigen::VectorXd& y1,
                           double nu, const SolverConfig& config,
                           const XSystem* prebuilt) {
  if (phi1.rows() != y1.size()) throw DimensionError("lasso: phi rows != y length");
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw std::invalid_argument("lasso: nu must be positive and finite");
  config.validate();
  const Eigen::Index m1 = phi1.rows();
  const Eigen::Index n = phi1.cols();
  if (m1 == 0 || n == 0) {
    RecoveryResult out;
    out.x_hat = Eigen::VectorXd::Zero(n);
    out.converged = true;
    out.final_objective = lasso_objective(phi1, y1, nu, out.x_hat);
    return out;
  }

  const Penalty pen = Penalty::l1(nu / static_cast<double>(m1));
  const double kkt_tol = std::max(1e-6, config.eps_abs);
  AdmmProblem p;
  p.phi1 = &phi1;
  p.phi1t_y1_over_m1 = (phi1.transpose() * y1) / static_cast<double>(m1);
  p.linear_term = Eigen::VectorXd::Zero(n);
  p.penalty = &pen;
  p.ball_radius = kUnboundedRadius;
  p.objective = [&](const Eigen::VectorXd& v) { return lasso_objective(phi1, y1, nu, v); };
  p.extra_stop = [&](const Eigen::VectorXd& v) {
    return lasso_kkt_residual(phi1, y1, nu, v) <= kkt_tol;
  };
  SolverConfig cfg = config;
  cfg.gamma = 0.0;
  cfg.ball_radius = kUnboundedRadius;
  return run_admm(p, cfg, {}, prebuilt);
}

void write_trace_csv(const RecoveryResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "iteration,primal_residual,dual_residual,objective\n";
  for (size_t i = 0; i < result.residual_history.size(); ++i) {
    const auto& r = result.residual_history[i];
    out << (i + 1) << ',' << csv::format_double(r.primal) << ','
        << csv::format_double(r.dual) << ',' << csv::format_double(r.objective)
        << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace satcs
