#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "types.hpp"

namespace satcs {

/// Default penalty grid: cv_grid_size log-spaced values spanning
/// [cv_grid_min_factor, 1] times ||phi1' y1||_inf / m1.
std::vector<double> cv_default_grid(const Eigen::MatrixXd& phi1,
                                    const Eigen::VectorXd& y1,
                                    const HarnessOptions& opts);

/// K-fold cross-validation of the LASSO penalty over `grid` (values in the
/// per-measurement normalization). Scores by mean squared validation
/// residual; ties break toward the larger penalty. The factorization is
/// shared across the grid within each fold.
double cross_validate_nu(const Eigen::MatrixXd& phi1, const Eigen::VectorXd& y1,
                         const std::vector<double>& grid, int folds,
                         std::mt19937_64& rng);

/// Sorted-L1 weight vector for an expected support of k_hat entries:
/// two_level puts weight 1 on the n - k_hat smallest ranks and
/// sl1_top_weight on the top k_hat; linear interpolates from 1 down to
/// sl1_top_weight.
Eigen::VectorXd make_sl1_weights(int n, int k_hat, const HarnessOptions& opts);

struct CalibrationResult {
  Penalty penalty;
  RecoveryResult result;  // solve at the accepted parameterization
};

/// Walk nu upward by doubling from nu_start until the recovered support is
/// no larger than the L1 reference solution's; at most 20 doublings.
CalibrationResult calibrate_nonconvex_params(PenaltyKind kind, int l1_solution_nnz,
                                             const SaturatedDataset& ds,
                                             const SolverConfig& config,
                                             double nu_start,
                                             const HarnessOptions& opts);

enum class SweepAxis { kSaturationRatio, kM, kK };
std::string sweep_axis_name(SweepAxis axis);
SweepAxis sweep_axis_from(const std::string& name);
ExperimentSpec apply_axis(const ExperimentSpec& spec, SweepAxis axis, double value);

struct TrialRecord {
  int axis_index = 0;
  double axis_value = 0.0;
  int trial = 0;
  std::string method;
  MetricsRecord metrics;
  int iterations = 0;
  double wall_time = 0.0;
  bool converged = false;
  bool diverged = false;
  double max_z_norm = 0.0;
  double nu = 0.0;  // penalty level actually used (diagnostic, not serialized)
};

struct CellAggregate {
  double axis_value = 0.0;
  std::string method;
  int trials = 0;  // trials contributing to the stats (divergences excluded)
  double snr_mean = 0.0, snr_std = 0.0;
  double ae_mean = 0.0, ae_std = 0.0;
  double l2_mean = 0.0, l2_std = 0.0;
  double time_mean = 0.0, time_std = 0.0;
  int diverged = 0;
};

struct SweepResult {
  std::string axis_name;
  std::vector<double> axis_values;
  std::vector<TrialRecord> records;       // deterministic order
  std::vector<CellAggregate> aggregates;  // axis-major, methods in run order
  int trials = 0;
  std::uint64_t spec_digest = 0;
};

/// Full benchmark sweep: for each (axis value, trial), synthesize one
/// instance, cross-validate the shared penalty level, then run the rejection
/// LASSO baseline and each requested recovery method. Trials are independent
/// work items; `threads` > 1 runs them on a pool without changing results.
SweepResult run_sweep(const ExperimentSpec& spec, SweepAxis axis,
                      const std::vector<double>& values, int threads = 1,
                      bool verbose = false);

void write_sweep_raw_csv(const SweepResult& result, const std::string& path);
void write_sweep_agg_csv(const SweepResult& result, const std::string& path);

struct TimingRow {
  int m = 0;
  int n = 0;
  std::string method;
  double mean_time = 0.0;  // seconds; mean over trials of median-of-3 solves
  int trials = 0;
};

/// Timing table over (m, n) cells at the spec's sparsity/noise/saturation.
/// Parameter selection (CV, calibration) is excluded from the timed region;
/// each reported time is the median of three identical solves.
std::vector<TimingRow> run_timing(const ExperimentSpec& spec,
                                  const std::vector<std::pair<int, int>>& cells,
                                  bool verbose = false);

void write_timing_csv(const std::vector<TimingRow>& rows, const std::string& path);

/// Emit per-method two-column series files (axis vs mean metric) from an
/// aggregated sweep CSV, one file per (metric, method).
void plot_series(const std::string& agg_csv_path, const std::string& out_dir);

}  // namespace satcs
