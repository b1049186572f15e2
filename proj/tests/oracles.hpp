// Independent reference implementations used to check the library: dense grid
// search for proximal operators, exhaustive support enumeration, and an
// accelerated proximal-gradient solver. Deliberately written from the problem
// definitions, sharing no code with the library internals.
#pragma once

#include <Eigen/Dense>

#include "types.hpp"

namespace oracle {

// Penalty value computed from the definitions (separate from Penalty::value).
double penalty_value(const satcs::Penalty& penalty, const Eigen::VectorXd& x);

// penalty(z) + (rho/2) ||z - u||^2, with the oracle's own penalty value.
double prox_objective(const satcs::Penalty& penalty, const Eigen::VectorXd& z,
                      const Eigen::VectorXd& u, double rho);

// Minimum of the prox objective over the grid {-5, ..., +5} with step 1e-3 per
// coordinate, keeping only points with ||z|| <= ball_radius (pass +inf for the
// unconstrained problem). Supports dimensions 1..3.
double grid_prox_min(const satcs::Penalty& penalty, const Eigen::VectorXd& u,
                     double rho, double ball_radius);

// Exact minimum of nu*||z||_0 + (rho/2)||z - u||^2 over ||z|| <= ball_radius
// by enumerating all 2^N supports and projecting within each.
double l0_ball_min_exhaustive(double nu, const Eigen::VectorXd& u, double rho,
                              double ball_radius);

// Accelerated proximal-gradient solver for
//   min nu ||x||_1 + 0.5 ||phi x - y||^2
// with adaptive restart, run until the stationarity residual is ~1e-13.
Eigen::VectorXd fista_lasso(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                            double nu, int max_iter = 200000);

double lasso_objective(const Eigen::MatrixXd& phi, const Eigen::VectorXd& y,
                       double nu, const Eigen::VectorXd& x);

}  // namespace oracle
