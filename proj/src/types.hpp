#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "errors.hpp"

namespace satcs {

constexpr double kUnboundedRadius = std::numeric_limits<double>::infinity();

struct GroundTruth {
  Eigen::VectorXd x_bar;
  std::vector<int> support;  // sorted positions of the nonzeros
  int sparsity_k = 0;
  void validate() const;
};

// Measurements split into the in-range part (phi1, y1) and the clipped part
// (phi2, y2, s2). s2 holds the clip direction: +1 at y_max, -1 at y_min.
// idx1/idx2 record each row's position in the original measurement vector.
struct SaturatedDataset {
  Eigen::MatrixXd phi1;
  Eigen::VectorXd y1;
  Eigen::MatrixXd phi2;
  Eigen::VectorXd y2;
  Eigen::VectorXi s2;
  double y_min = -1.0;
  double y_max = 1.0;
  std::vector<int> idx1;
  std::vector<int> idx2;

  Eigen::Index n() const { return phi1.cols(); }
  Eigen::Index m1() const { return phi1.rows(); }
  Eigen::Index m2() const { return phi2.rows(); }
  Eigen::Index m() const { return m1() + m2(); }
  void validate() const;
};

enum class PenaltyKind { kL1, kL0, kMcp, kSortedL1 };

struct Penalty {
  PenaltyKind kind = PenaltyKind::kL1;
  double nu = 0.0;
  double mcp_b = 0.0;       // concavity scale, MCP only
  Eigen::VectorXd weights;  // nonincreasing, sorted-L1 only

  static Penalty l1(double nu);
  static Penalty l0(double nu);
  static Penalty mcp(double nu, double b);
  static Penalty sorted_l1(double nu, Eigen::VectorXd weights);

  // n is the expected weight length; ignored except for the sorted-L1.
  void validate(Eigen::Index n) const;
  double value(const Eigen::VectorXd& x) const;
};

struct SolverConfig {
  double gamma = 0.1;
  double ball_radius = 1.0;  // kUnboundedRadius disables the norm ball
  double rho = 1.0;
  double eps_abs = 1e-6;
  double eps_rel = 1e-4;
  int max_iter = 2000;
  bool adaptive_rho = false;      // residual balancing, off by default
  bool record_objective = false;  // objective column in the iteration trace
  void validate() const;
};

struct SolverState {
  Eigen::VectorXd x;
  Eigen::VectorXd z;
  Eigen::VectorXd alpha;
  int iteration = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

struct IterationRecord {
  double primal = 0.0;
  double dual = 0.0;
  double objective = std::numeric_limits<double>::quiet_NaN();
};

struct RecoveryResult {
  Eigen::VectorXd x_hat;  // final z iterate
  int iterations = 0;
  std::vector<IterationRecord> residual_history;
  double wall_time = 0.0;  // seconds spent in the iteration loop
  bool converged = false;
  double max_z_norm = 0.0;  // largest ||z||_2 seen across iterations
  double final_objective = std::numeric_limits<double>::quiet_NaN();
};

struct MetricsRecord {
  double snr_db = 0.0;
  double angular_error = 0.0;
  double l2_error = 0.0;
  int nnz = 0;
  bool degenerate = false;  // zero-norm estimate; angular error pinned at 0.5
};

}  // namespace satcs
