#include "satcs.h"

#include <cstring>
#include <filesystem>
#include <string>

#include "analysis.hpp"
#include "config.hpp"
#include "harness.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "solver.hpp"
#include "synth.hpp"

struct satcs_dataset {
  satcs::SaturatedDataset impl;
};
struct satcs_ground_truth {
  satcs::GroundTruth impl;
};
struct satcs_penalty {
  satcs::Penalty impl;
};
struct satcs_result {
  satcs::RecoveryResult impl;
};
struct satcs_spec {
  satcs::ExperimentSpec impl;
};

namespace {

thread_local std::string t_last_error;

template <typename F>
satcs_status guarded(F&& body) {
  try {
    body();
    t_last_error.clear();
    return SATCS_OK;
  } catch (const satcs::DimensionError& e) {
    t_last_error = e.what();
    return SATCS_ERR_DIMENSION_MISMATCH;
  } catch (const satcs::ConfigError& e) {
    t_last_error = e.what();
    return SATCS_ERR_CONFIG;
  } catch (const satcs::IoError& e) {
    t_last_error = e.what();
    return SATCS_ERR_IO;
  } catch (const satcs::DivergenceError& e) {
    t_last_error = e.what();
    return SATCS_ERR_DIVERGED;
  } catch (const std::invalid_argument& e) {
    t_last_error = e.what();
    return SATCS_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return SATCS_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return SATCS_ERR_INTERNAL;
  }
}

satcs_status fail(satcs_status status, const char* message) {
  t_last_error = message;
  return status;
}

satcs_status require(bool ok, const char* message) {
  return ok ? SATCS_OK : fail(SATCS_ERR_INVALID_ARGUMENT, message);
}

satcs::SolverConfig to_cpp(const satcs_solver_config& c) {
  satcs::SolverConfig out;
  out.gamma = c.gamma;
  out.ball_radius = c.ball_radius;
  out.rho = c.rho;
  out.eps_abs = c.eps_abs;
  out.eps_rel = c.eps_rel;
  out.max_iter = c.max_iter;
  out.adaptive_rho = c.adaptive_rho != 0;
  out.record_objective = c.record_objective != 0;
  return out;
}

satcs_solver_config to_c(const satcs::SolverConfig& c) {
  satcs_solver_config out;
  out.gamma = c.gamma;
  out.ball_radius = c.ball_radius;
  out.rho = c.rho;
  out.eps_abs = c.eps_abs;
  out.eps_rel = c.eps_rel;
  out.max_iter = c.max_iter;
  out.adaptive_rho = c.adaptive_rho ? 1 : 0;
  out.record_objective = c.record_objective ? 1 : 0;
  return out;
}

satcs::PenaltyKind to_cpp_kind(satcs_penalty_kind kind) {
  switch (kind) {
    case SATCS_PENALTY_L1: return satcs::PenaltyKind::kL1;
    case SATCS_PENALTY_L0: return satcs::PenaltyKind::kL0;
    case SATCS_PENALTY_MCP: return satcs::PenaltyKind::kMcp;
    case SATCS_PENALTY_SORTED_L1: return satcs::PenaltyKind::kSortedL1;
  }
  throw std::invalid_argument("unknown penalty kind");
}

}  // namespace

extern "C" {

const char* satcs_version(void) { return "0.1.0"; }

const char* satcs_status_string(satcs_status status) {
  switch (status) {
    case SATCS_OK: return "ok";
    case SATCS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SATCS_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case SATCS_ERR_CONFIG: return "invalid config";
    case SATCS_ERR_IO: return "i/o error";
    case SATCS_ERR_DIVERGED: return "solver diverged";
    case SATCS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* satcs_last_error(void) { return t_last_error.c_str(); }

/* ---- datasets ---- */

satcs_status satcs_dataset_partition(const double* phi, const double* y, int m,
                                     int n, double y_min, double y_max,
                                     satcs_dataset** out) {
  if (auto s = require(phi && y && out && m >= 0 && n >= 1,
                       "dataset_partition: bad arguments"))
    return s;
  return guarded([&] {
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        phi_map(phi, m, n);
    Eigen::Map<const Eigen::VectorXd> y_map(y, m);
    auto* handle = new satcs_dataset{
        satcs::partition_measurements(phi_map, y_map, y_min, y_max)};
    *out = handle;
  });
}

satcs_status satcs_dataset_load(const char* dir, satcs_dataset** out) {
  if (auto s = require(dir && out, "dataset_load: bad arguments")) return s;
  return guarded([&] { *out = new satcs_dataset{satcs::load_dataset(dir)}; });
}

satcs_status satcs_dataset_save(const satcs_dataset* ds, const char* dir) {
  if (auto s = require(ds && dir, "dataset_save: bad arguments")) return s;
  return guarded([&] { satcs::save_dataset(ds->impl, dir); });
}

satcs_status satcs_dataset_dims(const satcs_dataset* ds, int* n, int* m1, int* m2) {
  if (auto s = require(ds != nullptr, "dataset_dims: null dataset")) return s;
  if (n) *n = static_cast<int>(ds->impl.n());
  if (m1) *m1 = static_cast<int>(ds->impl.m1());
  if (m2) *m2 = static_cast<int>(ds->impl.m2());
  t_last_error.clear();
  return SATCS_OK;
}

satcs_status satcs_dataset_thresholds(const satcs_dataset* ds, double* y_min,
                                      double* y_max) {
  if (auto s = require(ds != nullptr, "dataset_thresholds: null dataset")) return s;
  if (y_min) *y_min = ds->impl.y_min;
  if (y_max) *y_max = ds->impl.y_max;
  t_last_error.clear();
  return SATCS_OK;
}

satcs_status satcs_dataset_part1(const satcs_dataset* ds, double* phi1, double* y1) {
  if (auto s = require(ds != nullptr, "dataset_part1: null dataset")) return s;
  return guarded([&] {
    const auto& d = ds->impl;
    if (phi1) {
      for (Eigen::Index i = 0; i < d.m1(); ++i)
        for (Eigen::Index j = 0; j < d.n(); ++j) phi1[i * d.n() + j] = d.phi1(i, j);
    }
    if (y1)
      for (Eigen::Index i = 0; i < d.m1(); ++i) y1[i] = d.y1[i];
  });
}

satcs_status satcs_dataset_part2(const satcs_dataset* ds, double* phi2, double* y2,
                                 int* s2) {
  if (auto s = require(ds != nullptr, "dataset_part2: null dataset")) return s;
  return guarded([&] {
    const auto& d = ds->impl;
    if (phi2) {
      for (Eigen::Index i = 0; i < d.m2(); ++i)
        for (Eigen::Index j = 0; j < d.n(); ++j) phi2[i * d.n() + j] = d.phi2(i, j);
    }
    if (y2)
      for (Eigen::Index i = 0; i < d.m2(); ++i) y2[i] = d.y2[i];
    if (s2)
      for (Eigen::Index i = 0; i < d.m2(); ++i) s2[i] = d.s2[i];
  });
}

void satcs_dataset_free(satcs_dataset* ds) { delete ds; }

/* ---- ground truth ---- */

satcs_status satcs_ground_truth_load(const char* path, satcs_ground_truth** out) {
  if (auto s = require(path && out, "ground_truth_load: bad arguments")) return s;
  return guarded([&] {
    *out = new satcs_ground_truth{satcs::load_ground_truth(path)};
  });
}

satcs_status satcs_ground_truth_save(const satcs_ground_truth* gt, const char* path) {
  if (auto s = require(gt && path, "ground_truth_save: bad arguments")) return s;
  return guarded([&] { satcs::save_ground_truth(gt->impl, path); });
}

satcs_status satcs_ground_truth_dim(const satcs_ground_truth* gt, int* n, int* k) {
  if (auto s = require(gt != nullptr, "ground_truth_dim: null handle")) return s;
  if (n) *n = static_cast<int>(gt->impl.x_bar.size());
  if (k) *k = gt->impl.sparsity_k;
  t_last_error.clear();
  return SATCS_OK;
}

satcs_status satcs_ground_truth_signal(const satcs_ground_truth* gt, double* out,
                                       int len) {
  if (auto s = require(gt && out, "ground_truth_signal: bad arguments")) return s;
  if (auto s = require(len == gt->impl.x_bar.size(),
                       "ground_truth_signal: wrong buffer length"))
    return s;
  std::memcpy(out, gt->impl.x_bar.data(), sizeof(double) * static_cast<size_t>(len));
  t_last_error.clear();
  return SATCS_OK;
}

void satcs_ground_truth_free(satcs_ground_truth* gt) { delete gt; }

/* ---- penalties ---- */

satcs_status satcs_penalty_l1(double nu, satcs_penalty** out) {
  if (auto s = require(out != nullptr, "penalty_l1: null output")) return s;
  return guarded([&] { *out = new satcs_penalty{satcs::Penalty::l1(nu)}; });
}

satcs_status satcs_penalty_l0(double nu, satcs_penalty** out) {
  if (auto s = require(out != nullptr, "penalty_l0: null output")) return s;
  return guarded([&] { *out = new satcs_penalty{satcs::Penalty::l0(nu)}; });
}

satcs_status satcs_penalty_mcp(double nu, double b, satcs_penalty** out) {
  if (auto s = require(out != nullptr, "penalty_mcp: null output")) return s;
  return guarded([&] { *out = new satcs_penalty{satcs::Penalty::mcp(nu, b)}; });
}

satcs_status satcs_penalty_sorted_l1(double nu, const double* weights, int n,
                                     satcs_penalty** out) {
  if (auto s = require(weights && out && n >= 1, "penalty_sorted_l1: bad arguments"))
    return s;
  return guarded([&] {
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights, n);
    *out = new satcs_penalty{satcs::Penalty::sorted_l1(nu, std::move(w))};
  });
}

satcs_status satcs_penalty_info(const satcs_penalty* p, satcs_penalty_kind* kind,
                                double* nu) {
  if (auto s = require(p != nullptr, "penalty_info: null penalty")) return s;
  if (kind) {
    switch (p->impl.kind) {
      case satcs::PenaltyKind::kL1: *kind = SATCS_PENALTY_L1; break;
      case satcs::PenaltyKind::kL0: *kind = SATCS_PENALTY_L0; break;
      case satcs::PenaltyKind::kMcp: *kind = SATCS_PENALTY_MCP; break;
      case satcs::PenaltyKind::kSortedL1: *kind = SATCS_PENALTY_SORTED_L1; break;
    }
  }
  if (nu) *nu = p->impl.nu;
  t_last_error.clear();
  return SATCS_OK;
}

void satcs_penalty_free(satcs_penalty* p) { delete p; }

satcs_status satcs_make_sl1_weights(int n, int k_hat, double top_weight,
                                    double* out) {
  if (auto s = require(out != nullptr, "make_sl1_weights: null output")) return s;
  return guarded([&] {
    satcs::HarnessOptions opts;
    opts.sl1_top_weight = top_weight;
    Eigen::VectorXd w = satcs::make_sl1_weights(n, k_hat, opts);
    std::memcpy(out, w.data(), sizeof(double) * static_cast<size_t>(n));
  });
}

/* ---- solver ---- */

void satcs_solver_config_default(satcs_solver_config* config) {
  if (config) *config = to_c(satcs::SolverConfig{});
}

satcs_status satcs_solve(const satcs_dataset* ds, const satcs_penalty* penalty,
                         const satcs_solver_config* config, satcs_result** out) {
  if (auto s = require(ds && penalty && config && out, "solve: bad arguments"))
    return s;
  return guarded([&] {
    *out = new satcs_result{
        satcs::solve_m1bitcsl(ds->impl, penalty->impl, to_cpp(*config))};
  });
}

satcs_status satcs_solve_lasso(const satcs_dataset* ds, double nu,
                               const satcs_solver_config* config,
                               satcs_result** out) {
  if (auto s = require(ds && config && out, "solve_lasso: bad arguments")) return s;
  return guarded([&] {
    *out = new satcs_result{
        satcs::solve_lasso(ds->impl.phi1, ds->impl.y1, nu, to_cpp(*config))};
  });
}

satcs_status satcs_result_dim(const satcs_result* r, int* n) {
  if (auto s = require(r && n, "result_dim: bad arguments")) return s;
  *n = static_cast<int>(r->impl.x_hat.size());
  t_last_error.clear();
  return SATCS_OK;
}

satcs_status satcs_result_solution(const satcs_result* r, double* out, int len) {
  if (auto s = require(r && out, "result_solution: bad arguments")) return s;
  if (auto s = require(len == r->impl.x_hat.size(),
                       "result_solution: wrong buffer length"))
    return s;
  std::memcpy(out, r->impl.x_hat.data(), sizeof(double) * static_cast<size_t>(len));
  t_last_error.clear();
  return SATCS_OK;
}

satcs_status satcs_result_stats(const satcs_result* r, int* iterations,
                                int* converged, double* wall_time,
                                double* max_z_norm, double* final_objective) {
  if (auto s = require(r != nullptr, "result_stats: null result")) return s;
  if (iterations) *iterations = r->impl.iterations;
  if (converged) *converged = r->impl.converged ? 1 : 0;
  if (wall_time) *wall_time = r->impl.wall_time;
  if (max_z_norm) *max_z_norm = r->impl.max_z_norm;
  if (final_objective) *final_objective = r->impl.final_objective;
  t_last_error.clear();
  return SATCS_OK;
}

satcs_status satcs_result_residual(const satcs_result* r, int iter, double* primal,
                                   double* dual, double* objective) {
  if (auto s = require(r != nullptr, "result_residual: null result")) return s;
  if (auto s = require(iter >= 1 && iter <= r->impl.iterations,
                       "result_residual: iteration out of range"))
    return s;
  const auto& rec = r->impl.residual_history[static_cast<size_t>(iter - 1)];
  if (primal) *primal = rec.primal;
  if (dual) *dual = rec.dual;
  if (objective) *objective = rec.objective;
  t_last_error.clear();
  return SATCS_OK;
}

satcs_status satcs_result_write_trace(const satcs_result* r, const char* path) {
  if (auto s = require(r && path, "result_write_trace: bad arguments")) return s;
  return guarded([&] { satcs::write_trace_csv(r->impl, path); });
}

void satcs_result_free(satcs_result* r) { delete r; }

/* ---- experiment specs ---- */

satcs_status satcs_spec_create(satcs_spec** out) {
  if (auto s = require(out != nullptr, "spec_create: null output")) return s;
  return guarded([&] { *out = new satcs_spec{}; });
}

satcs_status satcs_spec_load(const char* path, satcs_spec** out) {
  if (auto s = require(path && out, "spec_load: bad arguments")) return s;
  return guarded([&] { *out = new satcs_spec{satcs::load_spec(path)}; });
}

satcs_status satcs_spec_set_seed(satcs_spec* spec, uint64_t seed) {
  if (auto s = require(spec != nullptr, "spec_set_seed: null spec")) return s;
  spec->impl.seed = seed;
  t_last_error.clear();
  return SATCS_OK;
}

satcs_status satcs_spec_seed(const satcs_spec* spec, uint64_t* seed) {
  if (auto s = require(spec && seed, "spec_seed: bad arguments")) return s;
  *seed = spec->impl.seed;
  t_last_error.clear();
  return SATCS_OK;
}

satcs_status satcs_spec_dims(const satcs_spec* spec, int* n, int* m, int* k) {
  if (auto s = require(spec != nullptr, "spec_dims: null spec")) return s;
  if (n) *n = spec->impl.n;
  if (m) *m = spec->impl.m;
  if (k) *k = spec->impl.k;
  t_last_error.clear();
  return SATCS_OK;
}

satcs_status satcs_spec_solver_config(const satcs_spec* spec,
                                      satcs_solver_config* config) {
  if (auto s = require(spec && config, "spec_solver_config: bad arguments")) return s;
  *config = to_c(spec->impl.solver);
  t_last_error.clear();
  return SATCS_OK;
}

satcs_status satcs_spec_harness(const satcs_spec* spec, double* mcp_b,
                                double* sl1_top_weight) {
  if (auto s = require(spec != nullptr, "spec_harness: null spec")) return s;
  if (mcp_b) *mcp_b = spec->impl.harness.mcp_b;
  if (sl1_top_weight) *sl1_top_weight = spec->impl.harness.sl1_top_weight;
  t_last_error.clear();
  return SATCS_OK;
}

void satcs_spec_free(satcs_spec* spec) { delete spec; }

/* ---- synthetic data ---- */

satcs_status satcs_synthesize(const satcs_spec* spec, uint64_t trial,
                              satcs_dataset** ds, satcs_ground_truth** gt) {
  if (auto s = require(spec != nullptr, "synthesize: null spec")) return s;
  return guarded([&] {
    satcs::SynthResult r = satcs::synthesize(spec->impl, trial);
    if (ds) *ds = new satcs_dataset{std::move(r.dataset)};
    if (gt) *gt = new satcs_ground_truth{std::move(r.truth)};
  });
}

satcs_status satcs_generate_signal(int n, int k, uint64_t seed, double* out) {
  if (auto s = require(out != nullptr, "generate_signal: null output")) return s;
  return guarded([&] {
    auto rng = satcs::make_stream(seed, 0, satcs::Stream::kSignal);
    satcs::GroundTruth gt = satcs::generate_signal(n, k, rng);
    std::memcpy(out, gt.x_bar.data(), sizeof(double) * static_cast<size_t>(n));
  });
}

/* ---- metrics and theory ---- */

satcs_status satcs_snr(const double* x_bar, const double* x_hat, int n, double* out) {
  if (auto s = require(x_bar && x_hat && out && n >= 1, "snr: bad arguments"))
    return s;
  return guarded([&] {
    Eigen::Map<const Eigen::VectorXd> a(x_bar, n), b(x_hat, n);
    *out = satcs::snr(a, b);
  });
}

satcs_status satcs_angular_error(const double* x_bar, const double* x_hat, int n,
                                 double* out, int* degenerate) {
  if (auto s = require(x_bar && x_hat && out && n >= 1,
                       "angular_error: bad arguments"))
    return s;
  return guarded([&] {
    Eigen::Map<const Eigen::VectorXd> a(x_bar, n), b(x_hat, n);
    bool flag = false;
    *out = satcs::angular_error(a, b, &flag);
    if (degenerate) *degenerate = flag ? 1 : 0;
  });
}

satcs_status satcs_nnz(const double* x, int n, double tol, int* out) {
  if (auto s = require(x && out && n >= 0, "nnz: bad arguments")) return s;
  return guarded([&] {
    Eigen::Map<const Eigen::VectorXd> v(x, n);
    *out = static_cast<int>(satcs::nnz(v, tol));
  });
}

satcs_status satcs_lambda_numeric(double threshold_t, double* out) {
  if (auto s = require(out != nullptr, "lambda_numeric: null output")) return s;
  return guarded([&] { *out = satcs::lambda_numeric(threshold_t); });
}

satcs_status satcs_estimate_lambda(double threshold_t, const double* x_bar, int n,
                                   long samples, uint64_t seed, double* lambda_hat,
                                   double* std_err) {
  if (auto s = require(x_bar && lambda_hat && n >= 1, "estimate_lambda: bad arguments"))
    return s;
  return guarded([&] {
    Eigen::Map<const Eigen::VectorXd> x(x_bar, n);
    auto rng = satcs::make_stream(seed, 0, satcs::Stream::kLambda);
    const auto est = satcs::estimate_lambda(threshold_t, x, samples, rng);
    *lambda_hat = est.lambda_hat;
    if (std_err) *std_err = est.std_err;
  });
}

satcs_status satcs_lemma1_vector_check(double threshold_t, const double* x_bar,
                                       int n, long samples, uint64_t seed,
                                       double* max_dev) {
  if (auto s = require(x_bar && max_dev && n >= 1,
                       "lemma1_vector_check: bad arguments"))
    return s;
  return guarded([&] {
    Eigen::Map<const Eigen::VectorXd> x(x_bar, n);
    auto rng = satcs::make_stream(seed, 0, satcs::Stream::kLambda);
    *max_dev = satcs::lemma1_vector_check(threshold_t, x, samples, rng);
  });
}

namespace {

satcs_status bound_impl(satcs::BoundKind kind, double p, double nu, int k,
                        double gamma, double lambda, double* out) {
  if (auto s = require(out != nullptr, "theorem1_bound: null output")) return s;
  return guarded([&] {
    satcs::TheoremInputs in;
    in.p = p;
    in.nu = nu;
    in.k = k;
    in.gamma = gamma;
    in.lambda = lambda;
    in.epsilon = 0.0;
    in.t_conf = 0.0;
    in.m1 = 1;
    in.m2 = 1;
    in.sigma = std::max(in.epsilon / in.m1, gamma / in.m2);
    *out = satcs::theorem1_bound(kind, in);
  });
}

}  // namespace

satcs_status satcs_theorem1_bound_l1(double p, double nu, int k, double gamma,
                                     double lambda, double* out) {
  return bound_impl(satcs::BoundKind::kL1, p, nu, k, gamma, lambda, out);
}

satcs_status satcs_theorem1_bound_l0(double p, double nu, int k, double gamma,
                                     double lambda, double* out) {
  return bound_impl(satcs::BoundKind::kL0, p, nu, k, gamma, lambda, out);
}

/* ---- harness ---- */

satcs_status satcs_cross_validate_nu(const satcs_dataset* ds, const double* grid,
                                     int grid_len, int folds, uint64_t seed,
                                     double* out) {
  if (auto s = require(ds && grid && out && grid_len >= 1,
                       "cross_validate_nu: bad arguments"))
    return s;
  return guarded([&] {
    std::vector<double> g(grid, grid + grid_len);
    auto rng = satcs::make_stream(seed, 0, satcs::Stream::kFolds);
    *out = satcs::cross_validate_nu(ds->impl.phi1, ds->impl.y1, g, folds, rng);
  });
}

satcs_status satcs_cross_validate_default(const satcs_dataset* ds, int folds,
                                          uint64_t seed, double* out) {
  if (auto s = require(ds && out, "cross_validate_default: bad arguments")) return s;
  return guarded([&] {
    satcs::HarnessOptions opts;
    const auto grid = satcs::cv_default_grid(ds->impl.phi1, ds->impl.y1, opts);
    auto rng = satcs::make_stream(seed, 0, satcs::Stream::kFolds);
    *out = satcs::cross_validate_nu(ds->impl.phi1, ds->impl.y1, grid, folds, rng);
  });
}

satcs_status satcs_calibrate_penalty(const satcs_dataset* ds,
                                     satcs_penalty_kind kind, int l1_nnz,
                                     double nu_start, double mcp_b,
                                     double sl1_top_weight,
                                     const satcs_solver_config* config,
                                     satcs_penalty** out) {
  if (auto s = require(ds && config && out, "calibrate_penalty: bad arguments"))
    return s;
  return guarded([&] {
    satcs::HarnessOptions opts;
    opts.mcp_b = mcp_b;
    opts.sl1_top_weight = sl1_top_weight;
    const auto cal = satcs::calibrate_nonconvex_params(
        to_cpp_kind(kind), l1_nnz, ds->impl, to_cpp(*config), nu_start, opts);
    *out = new satcs_penalty{cal.penalty};
  });
}

satcs_status satcs_sweep_run(const satcs_spec* spec, const char* axis,
                             const double* values, int n_values, int threads,
                             const char* out_dir, int verbose) {
  if (auto s = require(spec && axis && values && out_dir && n_values >= 1,
                       "sweep_run: bad arguments"))
    return s;
  return guarded([&] {
    std::vector<double> vals(values, values + n_values);
    const auto result = satcs::run_sweep(spec->impl, satcs::sweep_axis_from(axis),
                                         vals, threads, verbose != 0);
    std::filesystem::create_directories(out_dir);
    satcs::write_sweep_raw_csv(result, std::string(out_dir) + "/sweep_raw.csv");
    satcs::write_sweep_agg_csv(result, std::string(out_dir) + "/sweep_agg.csv");
  });
}

satcs_status satcs_bench_run(const satcs_spec* spec, const int* ms, const int* ns,
                             int n_cells, const char* out_csv, int verbose) {
  if (auto s = require(spec && ms && ns && out_csv && n_cells >= 1,
                       "bench_run: bad arguments"))
    return s;
  return guarded([&] {
    std::vector<std::pair<int, int>> cells;
    cells.reserve(static_cast<size_t>(n_cells));
    for (int i = 0; i < n_cells; ++i) cells.emplace_back(ms[i], ns[i]);
    const auto rows = satcs::run_timing(spec->impl, cells, verbose != 0);
    satcs::write_timing_csv(rows, out_csv);
  });
}

satcs_status satcs_plot_series(const char* agg_csv, const char* out_dir) {
  if (auto s = require(agg_csv && out_dir, "plot_series: bad arguments")) return s;
  return guarded([&] { satcs::plot_series(agg_csv, out_dir); });
}

}  // extern "C"
