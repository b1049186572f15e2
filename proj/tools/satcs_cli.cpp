// Command-line front end for the saturated-measurement recovery library.
// Talks to the library exclusively through the public C API.
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "satcs.h"

namespace {

struct CliError : std::runtime_error {
  int code;
  CliError(const std::string& what, int code) : std::runtime_error(what), code(code) {}
};

void check(satcs_status s, const std::string& what) {
  if (s == SATCS_OK) return;
  int code = 1;
  if (s == SATCS_ERR_CONFIG) code = 2;
  if (s == SATCS_ERR_DIVERGED) code = 3;
  std::string msg = what + ": " + satcs_status_string(s);
  const char* detail = satcs_last_error();
  if (detail && *detail) msg += std::string(" (") + detail + ")";
  throw CliError(msg, code);
}

struct SpecDeleter { void operator()(satcs_spec* p) const { satcs_spec_free(p); } };
struct DatasetDeleter { void operator()(satcs_dataset* p) const { satcs_dataset_free(p); } };
struct TruthDeleter { void operator()(satcs_ground_truth* p) const { satcs_ground_truth_free(p); } };
struct PenaltyDeleter { void operator()(satcs_penalty* p) const { satcs_penalty_free(p); } };
struct ResultDeleter { void operator()(satcs_result* p) const { satcs_result_free(p); } };

using SpecPtr = std::unique_ptr<satcs_spec, SpecDeleter>;
using DatasetPtr = std::unique_ptr<satcs_dataset, DatasetDeleter>;
using TruthPtr = std::unique_ptr<satcs_ground_truth, TruthDeleter>;
using PenaltyPtr = std::unique_ptr<satcs_penalty, PenaltyDeleter>;
using ResultPtr = std::unique_ptr<satcs_result, ResultDeleter>;

struct Options {
  std::string config;
  std::string out = "out";
  uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
  bool verbose = false;

  // generate
  uint64_t trial = 0;

  // solve
  std::string data_dir;
  std::string method = "lasso";
  double nu = -1.0;  // < 0 means cross-validate
  double gamma = -1.0;
  int max_iter = -1;
  int sl1_khat = -1;
  std::string truth_path;
  std::string trace_path;

  // sweep
  std::string axis = "saturation_ratio";
  std::vector<double> values;
  bool plot = false;

  // bench
  std::vector<std::string> cells = {"500x1000", "1000x1000", "500x2000",
                                    "1000x2000", "1500x2000"};

  // theory
  double threshold_t = 1.0;
  long samples = 100000;
  int theory_n = -1;
  int theory_k = -1;
  double theory_p = 1.0;
  double theory_nu = 0.1;
  double theory_gamma = -1.0;

  // plot
  std::string agg_csv;
};

SpecPtr load_spec(const Options& opt) {
  satcs_spec* raw = nullptr;
  if (opt.config.empty()) {
    check(satcs_spec_create(&raw), "create default spec");
  } else {
    check(satcs_spec_load(opt.config.c_str(), &raw), "load " + opt.config);
  }
  SpecPtr spec(raw);
  if (opt.seed_set) check(satcs_spec_set_seed(spec.get(), opt.seed), "set seed");
  return spec;
}

void write_vector_csv(const std::string& path, const std::vector<double>& v) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw CliError("cannot open " + path + " for writing", 1);
  for (double x : v) std::fprintf(f, "%.17g\n", x);
  std::fclose(f);
}

int run_generate(const Options& opt) {
  SpecPtr spec = load_spec(opt);
  satcs_dataset* ds_raw = nullptr;
  satcs_ground_truth* gt_raw = nullptr;
  check(satcs_synthesize(spec.get(), opt.trial, &ds_raw, &gt_raw), "synthesize");
  DatasetPtr ds(ds_raw);
  TruthPtr gt(gt_raw);

  std::filesystem::create_directories(opt.out);
  const std::string ds_dir = opt.out + "/dataset";
  check(satcs_dataset_save(ds.get(), ds_dir.c_str()), "save dataset");
  const std::string gt_path = opt.out + "/x_bar.csv";
  check(satcs_ground_truth_save(gt.get(), gt_path.c_str()), "save signal");

  int n = 0, m1 = 0, m2 = 0;
  check(satcs_dataset_dims(ds.get(), &n, &m1, &m2), "dataset dims");
  double y_min = 0.0, y_max = 0.0;
  check(satcs_dataset_thresholds(ds.get(), &y_min, &y_max), "dataset thresholds");
  std::printf("wrote %s (n=%d m1=%d m2=%d thresholds=[%g, %g]) and %s\n",
              ds_dir.c_str(), n, m1, m2, y_min, y_max, gt_path.c_str());
  return 0;
}

PenaltyPtr build_penalty(const Options& opt, const SpecPtr& spec, int n, double nu) {
  satcs_penalty* raw = nullptr;
  if (opt.method == "l1") {
    check(satcs_penalty_l1(nu, &raw), "build penalty");
  } else if (opt.method == "l0") {
    check(satcs_penalty_l0(nu, &raw), "build penalty");
  } else if (opt.method == "mcp") {
    double mcp_b = 0.0;
    check(satcs_spec_harness(spec.get(), &mcp_b, nullptr), "read harness options");
    check(satcs_penalty_mcp(nu, mcp_b, &raw), "build penalty");
  } else if (opt.method == "sl1") {
    double top_weight = 0.0;
    check(satcs_spec_harness(spec.get(), nullptr, &top_weight), "read harness options");
    int k_hat = opt.sl1_khat;
    if (k_hat < 0) check(satcs_spec_dims(spec.get(), nullptr, nullptr, &k_hat), "spec dims");
    if (k_hat > n) k_hat = n;
    std::vector<double> weights(static_cast<size_t>(n));
    check(satcs_make_sl1_weights(n, k_hat, top_weight, weights.data()),
          "build sorted-l1 weights");
    check(satcs_penalty_sorted_l1(nu, weights.data(), n, &raw), "build penalty");
  } else {
    throw CliError("unknown method: " + opt.method, 2);
  }
  return PenaltyPtr(raw);
}

int run_solve(const Options& opt) {
  SpecPtr spec = load_spec(opt);
  satcs_dataset* ds_raw = nullptr;
  check(satcs_dataset_load(opt.data_dir.c_str(), &ds_raw), "load " + opt.data_dir);
  DatasetPtr ds(ds_raw);

  int n = 0, m1 = 0, m2 = 0;
  check(satcs_dataset_dims(ds.get(), &n, &m1, &m2), "dataset dims");

  satcs_solver_config config;
  check(satcs_spec_solver_config(spec.get(), &config), "read solver config");
  if (opt.gamma >= 0.0) config.gamma = opt.gamma;
  if (opt.max_iter > 0) config.max_iter = opt.max_iter;
  if (!opt.trace_path.empty()) config.record_objective = 1;

  double nu = opt.nu;
  if (nu < 0.0) {
    uint64_t seed = 0;
    check(satcs_spec_seed(spec.get(), &seed), "read seed");
    check(satcs_cross_validate_default(ds.get(), 5, seed, &nu), "cross-validate");
    std::printf("cross-validated nu = %.17g\n", nu);
  }

  satcs_result* res_raw = nullptr;
  if (opt.method == "lasso") {
    check(satcs_solve_lasso(ds.get(), nu * m1, &config, &res_raw), "solve");
  } else {
    PenaltyPtr penalty = build_penalty(opt, spec, n, nu);
    check(satcs_solve(ds.get(), penalty.get(), &config, &res_raw), "solve");
  }
  ResultPtr res(res_raw);

  int iterations = 0, converged = 0;
  double wall_time = 0.0;
  check(satcs_result_stats(res.get(), &iterations, &converged, &wall_time, nullptr,
                           nullptr),
        "result stats");
  std::vector<double> x_hat(static_cast<size_t>(n));
  check(satcs_result_solution(res.get(), x_hat.data(), n), "result solution");
  int nnz = 0;
  check(satcs_nnz(x_hat.data(), n, 1e-8, &nnz), "count nonzeros");

  std::filesystem::create_directories(opt.out);
  const std::string sol_path = opt.out + "/x_hat.csv";
  write_vector_csv(sol_path, x_hat);
  std::printf("method=%s iterations=%d converged=%d wall_time=%.3gs nnz=%d -> %s\n",
              opt.method.c_str(), iterations, converged, wall_time, nnz,
              sol_path.c_str());

  if (!opt.trace_path.empty()) {
    check(satcs_result_write_trace(res.get(), opt.trace_path.c_str()), "write trace");
    std::printf("trace -> %s\n", opt.trace_path.c_str());
  }

  if (!opt.truth_path.empty()) {
    satcs_ground_truth* gt_raw = nullptr;
    check(satcs_ground_truth_load(opt.truth_path.c_str(), &gt_raw),
          "load " + opt.truth_path);
    TruthPtr gt(gt_raw);
    int gt_n = 0;
    check(satcs_ground_truth_dim(gt.get(), &gt_n, nullptr), "signal dims");
    if (gt_n != n) throw CliError("signal length does not match dataset", 1);
    std::vector<double> x_bar(static_cast<size_t>(n));
    check(satcs_ground_truth_signal(gt.get(), x_bar.data(), n), "read signal");
    double snr_db = 0.0, ae = 0.0;
    int degenerate = 0;
    check(satcs_snr(x_bar.data(), x_hat.data(), n, &snr_db), "snr");
    check(satcs_angular_error(x_bar.data(), x_hat.data(), n, &ae, &degenerate),
          "angular error");
    std::printf("snr_db=%.6g angular_error=%.6g%s\n", snr_db, ae,
                degenerate ? " (degenerate)" : "");
  }
  return 0;
}

int run_sweep(const Options& opt) {
  if (opt.values.empty()) throw CliError("sweep requires --values", 2);
  SpecPtr spec = load_spec(opt);
  check(satcs_sweep_run(spec.get(), opt.axis.c_str(), opt.values.data(),
                        static_cast<int>(opt.values.size()), opt.threads,
                        opt.out.c_str(), opt.verbose ? 1 : 0),
        "run sweep");
  std::printf("wrote %s/sweep_raw.csv and %s/sweep_agg.csv\n", opt.out.c_str(),
              opt.out.c_str());
  if (opt.plot) {
    const std::string agg = opt.out + "/sweep_agg.csv";
    check(satcs_plot_series(agg.c_str(), opt.out.c_str()), "plot series");
    std::printf("wrote per-method series files under %s\n", opt.out.c_str());
  }
  return 0;
}

int run_bench(const Options& opt) {
  SpecPtr spec = load_spec(opt);
  std::vector<int> ms, ns;
  for (const std::string& cell : opt.cells) {
    const auto x = cell.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= cell.size())
      throw CliError("bad bench cell (want MxN): " + cell, 2);
    try {
      ms.push_back(std::stoi(cell.substr(0, x)));
      ns.push_back(std::stoi(cell.substr(x + 1)));
    } catch (const std::exception&) {
      throw CliError("bad bench cell (want MxN): " + cell, 2);
    }
  }
  std::filesystem::create_directories(opt.out);
  const std::string csv = opt.out + "/bench.csv";
  check(satcs_bench_run(spec.get(), ms.data(), ns.data(),
                        static_cast<int>(ms.size()), csv.c_str(),
                        opt.verbose ? 1 : 0),
        "run bench");
  std::printf("wrote %s\n", csv.c_str());
  return 0;
}

int run_theory(const Options& opt) {
  SpecPtr spec = load_spec(opt);
  int n = opt.theory_n, k = opt.theory_k;
  if (n < 0 || k < 0) {
    int spec_n = 0, spec_k = 0;
    check(satcs_spec_dims(spec.get(), &spec_n, nullptr, &spec_k), "spec dims");
    if (n < 0) n = spec_n;
    if (k < 0) k = spec_k;
  }
  double gamma = opt.theory_gamma;
  if (gamma < 0.0) {
    satcs_solver_config config;
    check(satcs_spec_solver_config(spec.get(), &config), "read solver config");
    gamma = config.gamma;
  }
  uint64_t seed = 0;
  check(satcs_spec_seed(spec.get(), &seed), "read seed");

  double lambda = 0.0;
  check(satcs_lambda_numeric(opt.threshold_t, &lambda), "channel gain quadrature");
  std::printf("lambda(t=%g) = %.12g  [quadrature]\n", opt.threshold_t, lambda);

  std::vector<double> x_bar(static_cast<size_t>(n));
  check(satcs_generate_signal(n, k, seed, x_bar.data()), "generate signal");
  double lambda_hat = 0.0, std_err = 0.0, max_dev = 0.0;
  check(satcs_estimate_lambda(opt.threshold_t, x_bar.data(), n, opt.samples, seed,
                              &lambda_hat, &std_err),
        "channel gain monte carlo");
  check(satcs_lemma1_vector_check(opt.threshold_t, x_bar.data(), n, opt.samples,
                                  seed, &max_dev),
        "expectation direction check");
  std::printf("lambda_hat = %.12g +/- %.3g  (%ld samples, n=%d k=%d)\n", lambda_hat,
              std_err, opt.samples, n, k);
  std::printf("max |E[s phi] - lambda_hat x_bar| = %.3g\n", max_dev);

  if (gamma > 0.0 && lambda > 0.0) {
    double bound_l1 = 0.0, bound_l0 = 0.0;
    check(satcs_theorem1_bound_l1(opt.theory_p, opt.theory_nu, k, gamma, lambda,
                                  &bound_l1),
          "l1 bound");
    check(satcs_theorem1_bound_l0(opt.theory_p, opt.theory_nu, k, gamma, lambda,
                                  &bound_l0),
          "l0 bound");
    std::printf("error bound (l1): %.6g   error bound (l0): %.6g"
                "  [p=%g nu=%g k=%d gamma=%g]\n",
                bound_l1, bound_l0, opt.theory_p, opt.theory_nu, k, gamma);
  }
  return 0;
}

int run_plot(const Options& opt) {
  check(satcs_plot_series(opt.agg_csv.c_str(), opt.out.c_str()), "plot series");
  std::printf("wrote per-method series files under %s\n", opt.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{std::string("sparse recovery from saturated measurements (v") +
               satcs_version() + ")"};
  app.require_subcommand(1);
  app.fallthrough();  // app-level options may follow the subcommand name
  app.add_option("--config", opt.config, "experiment config file (key=value lines)");
  app.add_option("--out", opt.out, "output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", opt.seed, "override the config seed");
  app.add_option("--threads", opt.threads, "worker threads for sweeps")
      ->capture_default_str();
  app.add_flag("--verbose", opt.verbose, "progress output on stderr");

  auto* gen = app.add_subcommand("generate", "synthesize one trial dataset");
  gen->add_option("--trial", opt.trial, "trial index")->capture_default_str();

  auto* solve = app.add_subcommand("solve", "recover a signal from a saved dataset");
  solve->add_option("--data", opt.data_dir, "dataset directory")->required();
  solve->add_option("--method", opt.method, "lasso|l1|l0|mcp|sl1")
      ->check(CLI::IsMember({"lasso", "l1", "l0", "mcp", "sl1"}))
      ->capture_default_str();
  solve->add_option("--nu", opt.nu,
                    "penalty level, normalized units (default: cross-validated)");
  solve->add_option("--gamma", opt.gamma, "saturation trade-off override");
  solve->add_option("--max-iter", opt.max_iter, "iteration cap override");
  solve->add_option("--sl1-khat", opt.sl1_khat,
                    "expected support size for sorted-l1 weights (default: config k)");
  solve->add_option("--truth", opt.truth_path, "signal file for recovery metrics");
  solve->add_option("--trace", opt.trace_path, "write per-iteration residuals here");

  auto* sweep = app.add_subcommand("sweep", "run trials across an axis, write CSVs");
  sweep->add_option("--axis", opt.axis, "saturation_ratio|m|k")
      ->check(CLI::IsMember({"saturation_ratio", "m", "k"}))
      ->capture_default_str();
  sweep->add_option("--values", opt.values, "axis values (comma separated)")
      ->delimiter(',')
      ->required();
  sweep->add_flag("--plot", opt.plot, "also write per-method series files");

  auto* bench = app.add_subcommand("bench", "time the solvers across problem sizes");
  bench->add_option("--cells", opt.cells, "problem sizes as MxN (comma separated)")
      ->delimiter(',')
      ->capture_default_str();

  auto* theory = app.add_subcommand(
      "theory", "channel gain estimates and recovery-error bounds");
  theory->add_option("--t", opt.threshold_t, "saturation threshold")
      ->capture_default_str();
  theory->add_option("--samples", opt.samples, "monte carlo sample count")
      ->capture_default_str();
  theory->add_option("--n", opt.theory_n, "signal dimension (default: config n)");
  theory->add_option("--k", opt.theory_k, "sparsity (default: config k)");
  theory->add_option("--p", opt.theory_p, "probability level for the bounds")
      ->capture_default_str();
  theory->add_option("--nu", opt.theory_nu, "penalty level for the bounds")
      ->capture_default_str();
  theory->add_option("--gamma", opt.theory_gamma,
                     "saturation trade-off for the bounds (default: config gamma)");

  auto* plot = app.add_subcommand("plot", "series files from an aggregated sweep CSV");
  plot->add_option("--agg", opt.agg_csv, "aggregated sweep CSV")->required();

  CLI11_PARSE(app, argc, argv);
  opt.seed_set = seed_opt->count() > 0;

  try {
    if (gen->parsed()) return run_generate(opt);
    if (solve->parsed()) return run_solve(opt);
    if (sweep->parsed()) return run_sweep(opt);
    if (bench->parsed()) return run_bench(opt);
    if (theory->parsed()) return run_theory(opt);
    if (plot->parsed()) return run_plot(opt);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
