#pragma once

#include "types.hpp"

namespace satcs {

/// Euclidean projection onto the ball of radius c (c may be infinite).
Eigen::VectorXd project_l2_ball(const Eigen::VectorXd& v, double c);

/// Minimizer of f(z) + (rho/2)||z - u||^2 for the separable penalties; the
/// sorted-L1 case dispatches to prox_sorted_l1.
Eigen::VectorXd prox_separable(const Penalty& penalty, const Eigen::VectorXd& u,
                               double rho);

/// Minimizer of f(z) + (rho/2)||z - u||^2 subject to ||z||_2 <= c. Exact for
/// L1 (radial scaling of the soft threshold) and L0 (prefix support search);
/// MCP and sorted-L1 bisect a quadratic multiplier and keep the best of the
/// bisection point and the projected unconstrained prox, compared by
/// objective value. theta_hint, when given, warm-starts the bisection
/// bracket; it only affects where the search begins, not what it accepts.
Eigen::VectorXd prox_ball_constrained(const Penalty& penalty,
                                      const Eigen::VectorXd& u, double rho,
                                      double c, double* theta_hint = nullptr);

/// Sorted-L1 prox: magnitudes in descending order are paired with weights in
/// ascending order, soft-thresholded, then adjacent ranks whose outputs come
/// out inverted are re-paired until the ordering is consistent.
Eigen::VectorXd prox_sorted_l1(const Eigen::VectorXd& u, double nu,
                               const Eigen::VectorXd& weights, double rho);

// Scalar rules, exposed for tests.
double prox_l1_scalar(double u, double nu_eff);
double prox_l0_scalar(double u, double nu_eff);
double prox_mcp_scalar(double u, double nu, double b, double rho);

}  // namespace satcs
