#pragma once

#include <random>

#include "types.hpp"

namespace satcs {

/// 10 log10(||x_bar||^2 / ||x_bar - x_hat||^2), capped at +300 dB.
double snr(const Eigen::VectorXd& x_bar, const Eigen::VectorXd& x_hat);

/// arccos of the clamped cosine similarity, normalized by pi. A zero-norm
/// input yields 0.5 and sets *degenerate when given.
double angular_error(const Eigen::VectorXd& x_bar, const Eigen::VectorXd& x_hat,
                     bool* degenerate = nullptr);

/// Entries with |x_i| > tol.
Eigen::Index nnz(const Eigen::VectorXd& x, double tol = 1e-8);

MetricsRecord compute_metrics(const Eigen::VectorXd& x_bar,
                              const Eigen::VectorXd& x_hat);

/// E[eta(g) g] for the hard saturation channel at threshold t, where
/// eta(g) = 1{g >= t} - 1{g <= -t} and g is standard normal; adaptive
/// Simpson quadrature on [-10, 10] to 1e-10.
double lambda_numeric(double threshold_t);

struct LambdaEstimate {
  double lambda_hat = 0.0;
  double std_err = 0.0;
};

/// Monte Carlo estimate of E[eta(phi'x_bar) phi'x_bar] over fresh Gaussian
/// rows; x_bar must be unit norm, samples >= 1000.
LambdaEstimate estimate_lambda(double threshold_t, const Eigen::VectorXd& x_bar,
                               long samples, std::mt19937_64& rng);

/// Max-norm deviation ||mean(eta(g) phi) - lambda_hat x_bar||_inf from the
/// same sample set used for lambda_hat.
double lemma1_vector_check(double threshold_t, const Eigen::VectorXd& x_bar,
                           long samples, std::mt19937_64& rng);

enum class BoundKind { kL1, kL0 };

struct TheoremInputs {
  double p = 1.0;       // probability level in (0, 1]
  double lambda = 0.0;  // channel gain
  double gamma = 0.0;   // saturation trade-off
  double nu = 0.0;      // penalty level
  int k = 0;            // sparsity
  double epsilon = 0.0; // unsaturated noise scale
  double t_conf = 0.0;  // confidence parameter
  double sigma = 0.0;   // must equal max(epsilon/m1, gamma/m2)
  int m1 = 0;
  int m2 = 0;
  void validate() const;
};

/// Recovery-error bound: 3 p nu sqrt(k) / (gamma lambda) for the L1 penalty,
/// sqrt(4 p nu k / (gamma lambda)) for the L0 penalty.
double theorem1_bound(BoundKind kind, const TheoremInputs& inputs);

}  // namespace satcs
