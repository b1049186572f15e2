#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <thread>

#include "analysis.hpp"
#include "csv.hpp"
#include "rng.hpp"
#include "solver.hpp"
#include "synth.hpp"

namespace satcs {

std::vector<double> cv_default_grid(const Eigen::MatrixXd& phi1,
                                    const Eigen::VectorXd& y1,
                                    const HarnessOptions& opts) {
  opts.validate();
  if (phi1.rows() != y1.size()) throw DimensionError("cv grid: phi rows != y length");
  if (phi1.rows() == 0) throw std::invalid_argument("cv grid: no unsaturated rows");
  const double nu_max =
      (phi1.transpose() * y1).lpNorm<Eigen::Infinity>() / static_cast<double>(phi1.rows());
  if (!(nu_max > 0.0)) throw std::invalid_argument("cv grid: degenerate data (phi1' y1 = 0)");
  std::vector<double> grid(static_cast<size_t>(opts.cv_grid_size));
  if (opts.cv_grid_size == 1) {
    grid[0] = nu_max;
    return grid;
  }
  const double log_min = std::log(opts.cv_grid_min_factor);
  for (int i = 0; i < opts.cv_grid_size; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(opts.cv_grid_size - 1);
    grid[static_cast<size_t>(i)] = nu_max * std::exp(log_min * (1.0 - frac));
  }
  return grid;
}

double cross_validate_nu(const Eigen::MatrixXd& phi1, const Eigen::VectorXd& y1,
                         const std::vector<double>& grid, int folds,
                         std::mt19937_64& rng) {
  if (phi1.rows() != y1.size()) throw DimensionError("cv: phi rows != y length");
  if (folds < 2) throw std::invalid_argument("cv: need at least 2 folds");
  if (phi1.rows() < folds)
    throw std::invalid_argument("cv: fewer rows than folds");
  if (grid.empty()) throw std::invalid_argument("cv: empty grid");
  for (double g : grid) {
    if (!(g > 0.0) || !std::isfinite(g))
      throw std::invalid_argument("cv: grid values must be positive and finite");
  }

  const Eigen::Index rows = phi1.rows();
  std::vector<int> perm(static_cast<size_t>(rows));
  std::iota(perm.begin(), perm.end(), 0);
  for (Eigen::Index i = rows - 1; i > 0; --i) {
    const auto j = uniform_below(rng, static_cast<std::uint64_t>(i + 1));
    std::swap(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]);
  }

  // Ranking-quality fits: looser tolerances than a final solve.
  SolverConfig cv_cfg;
  cv_cfg.gamma = 0.0;
  cv_cfg.ball_radius = kUnboundedRadius;
  cv_cfg.eps_abs = 1e-4;
  cv_cfg.eps_rel = 1e-3;
  cv_cfg.max_iter = 500;

  std::vector<double> score(grid.size(), 0.0);
  Eigen::Index start = 0;
  for (int f = 0; f < folds; ++f) {
    const Eigen::Index size = rows / folds + (f < rows % folds ? 1 : 0);
    const Eigen::Index val_begin = start;
    const Eigen::Index val_end = start + size;
    start = val_end;

    Eigen::MatrixXd phi_train(rows - size, phi1.cols());
    Eigen::VectorXd y_train(rows - size);
    Eigen::MatrixXd phi_val(size, phi1.cols());
    Eigen::VectorXd y_val(size);
    Eigen::Index tr = 0, va = 0;
    for (Eigen::Index i = 0; i < rows; ++i) {
      const int row = perm[static_cast<size_t>(i)];
      if (i >= val_begin && i < val_end) {
        phi_val.row(va) = phi1.row(row);
        y_val[va++] = y1[row];
      } else {
        phi_train.row(tr) = phi1.row(row);
        y_train[tr++] = y1[row];
      }
    }

    const XSystem system(phi_train, cv_cfg.rho);
    for (size_t gi = 0; gi < grid.size(); ++gi) {
      const double nu_lasso = grid[gi] * static_cast<double>(phi_train.rows());
      const RecoveryResult fit = solve_lasso(phi_train, y_train, nu_lasso, cv_cfg, &system);
      score[gi] += (phi_val * fit.x_hat - y_val).squaredNorm() / static_cast<double>(size);
    }
  }

  size_t best = 0;
  for (size_t gi = 1; gi < grid.size(); ++gi) {
    if (score[gi] < score[best] || (score[gi] == score[best] && grid[gi] > grid[best]))
      best = gi;
  }
  return grid[best];
}

Eigen::VectorXd make_sl1_weights(int n, int k_hat, const HarnessOptions& opts) {
  opts.validate();
  if (n < 1) throw std::invalid_argument("sl1 weights: n must be >= 1");
  if (k_hat < 0 || k_hat > n)
    throw std::invalid_argument("sl1 weights: k_hat must lie in [0, n]");
  Eigen::VectorXd w(n);
  if (opts.sl1_generator == Sl1Generator::kTwoLevel) {
    for (int i = 0; i < n; ++i) w[i] = i < n - k_hat ? 1.0 : opts.sl1_top_weight;
  } else {
    if (n == 1) {
      w[0] = 1.0;
    } else {
      for (int i = 0; i < n; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(n - 1);
        w[i] = 1.0 - (1.0 - opts.sl1_top_weight) * frac;
      }
    }
  }
  return w;
}

namespace {

Penalty make_penalty(PenaltyKind kind, double nu, Eigen::Index n, int k_hat,
                     const HarnessOptions& opts) {
  switch (kind) {
    case PenaltyKind::kL1: return Penalty::l1(nu);
    case PenaltyKind::kL0: return Penalty::l0(nu);
    case PenaltyKind::kMcp: return Penalty::mcp(nu, opts.mcp_b);
    case PenaltyKind::kSortedL1:
      return Penalty::sorted_l1(nu, make_sl1_weights(static_cast<int>(n), k_hat, opts));
  }
  throw std::invalid_argument("unknown penalty kind");
}

}  // namespace

CalibrationResult calibrate_nonconvex_params(PenaltyKind kind, int l1_solution_nnz,
                                             const SaturatedDataset& ds,
                                             const SolverConfig& config,
                                             double nu_start,
                                             const HarnessOptions& opts) {
  if (kind == PenaltyKind::kL1)
    throw std::invalid_argument("calibrate: L1 takes its penalty level from CV");
  if (l1_solution_nnz < 1)
    throw std::invalid_argument("calibrate: reference support must be nonempty");
  if (!(nu_start > 0.0) || !std::isfinite(nu_start))
    throw std::invalid_argument("calibrate: nu_start must be positive and finite");
  const int max_doublings = 20;
  double nu = nu_start;
  for (int step = 0; step <= max_doublings; ++step, nu *= 2.0) {
    const Penalty penalty = make_penalty(kind, nu, ds.n(), l1_solution_nnz, opts);
    RecoveryResult res = solve_m1bitcsl(ds, penalty, config);
    if (nnz(res.x_hat) <= l1_solution_nnz)
      return CalibrationResult{penalty, std::move(res)};
  }
  throw std::runtime_error("calibrate: no penalty level within 20 doublings of " +
                           std::to_string(nu_start) + " met the support target");
}

std::string sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kSaturationRatio: return "saturation_ratio";
    case SweepAxis::kM: return "m";
    case SweepAxis::kK: return "k";
  }
  return "?";
}

SweepAxis sweep_axis_from(const std::string& name) {
  if (name == "saturation_ratio") return SweepAxis::kSaturationRatio;
  if (name == "m") return SweepAxis::kM;
  if (name == "k") return SweepAxis::kK;
  throw std::invalid_argument("unknown sweep axis '" + name +
                              "' (expected saturation_ratio, m, k)");
}

ExperimentSpec apply_axis(const ExperimentSpec& spec, SweepAxis axis, double value) {
  ExperimentSpec out = spec;
  switch (axis) {
    case SweepAxis::kSaturationRatio:
      out.saturation_ratio = value;
      break;
    case SweepAxis::kM:
      out.m = static_cast<int>(std::llround(value));
      break;
    case SweepAxis::kK:
      out.k = static_cast<int>(std::llround(value));
      break;
  }
  out.validate();
  return out;
}

namespace {

struct MethodPlan {
  std::string name;  // "lasso" or "alg1-<penalty>"
  bool is_lasso = false;
  PenaltyKind kind = PenaltyKind::kL1;
  bool record = true;  // l1 may run only as the calibration reference
};

std::vector<MethodPlan> plan_methods(const ExperimentSpec& spec) {
  std::vector<MethodPlan> plan;
  plan.push_back({"lasso", true, PenaltyKind::kL1, true});
  const bool wants_l1 =
      std::find(spec.penalties.begin(), spec.penalties.end(), PenaltyKind::kL1) !=
      spec.penalties.end();
  const bool needs_reference = std::any_of(
      spec.penalties.begin(), spec.penalties.end(),
      [](PenaltyKind k) { return k != PenaltyKind::kL1; });
  if (wants_l1 || needs_reference)
    plan.push_back({"alg1-l1", false, PenaltyKind::kL1, wants_l1});
  for (PenaltyKind kind : spec.penalties) {
    if (kind == PenaltyKind::kL1) continue;
    plan.push_back({"alg1-" + penalty_kind_name(kind), false, kind, true});
  }
  return plan;
}

TrialRecord base_record(int axis_index, double axis_value, int trial,
                        const std::string& method) {
  TrialRecord rec;
  rec.axis_index = axis_index;
  rec.axis_value = axis_value;
  rec.trial = trial;
  rec.method = method;
  return rec;
}

void fill_record(TrialRecord& rec, const RecoveryResult& res,
                 const Eigen::VectorXd& x_bar, double nu) {
  rec.metrics = compute_metrics(x_bar, res.x_hat);
  rec.iterations = res.iterations;
  rec.wall_time = res.wall_time;
  rec.converged = res.converged;
  rec.max_z_norm = res.max_z_norm;
  rec.nu = nu;
}

void mark_diverged(TrialRecord& rec, int iteration) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rec.diverged = true;
  rec.converged = false;
  rec.iterations = iteration;
  rec.metrics.snr_db = nan;
  rec.metrics.angular_error = nan;
  rec.metrics.l2_error = nan;
  rec.metrics.nnz = -1;
  rec.metrics.degenerate = true;
}

// One (axis value, trial) work item: synthesize, cross-validate, run every
// planned method against the same dataset.
std::vector<TrialRecord> run_item(const ExperimentSpec& cell_spec, int axis_index,
                                  double axis_value, int trial,
                                  const std::vector<MethodPlan>& plan) {
  std::vector<TrialRecord> out;
  const SynthResult synth = synthesize(cell_spec, static_cast<std::uint64_t>(trial));
  const SaturatedDataset& ds = synth.dataset;
  const Eigen::VectorXd& x_bar = synth.truth.x_bar;

  const std::vector<double> grid = cv_default_grid(ds.phi1, ds.y1, cell_spec.harness);
  auto rng_folds = make_stream(cell_spec.seed, static_cast<std::uint64_t>(trial), Stream::kFolds);
  const double nu_cv =
      cross_validate_nu(ds.phi1, ds.y1, grid, cell_spec.harness.cv_folds, rng_folds);

  int l1_nnz = 0;
  for (const MethodPlan& mp : plan) {
    TrialRecord rec = base_record(axis_index, axis_value, trial, mp.name);
    try {
      if (mp.is_lasso) {
        const double nu_lasso = nu_cv * static_cast<double>(ds.m1());
        const RecoveryResult res = solve_lasso(ds.phi1, ds.y1, nu_lasso, cell_spec.solver);
        fill_record(rec, res, x_bar, nu_cv);
      } else if (mp.kind == PenaltyKind::kL1) {
        const RecoveryResult res =
            solve_m1bitcsl(ds, Penalty::l1(nu_cv), cell_spec.solver);
        l1_nnz = std::max(1, static_cast<int>(nnz(res.x_hat)));
        fill_record(rec, res, x_bar, nu_cv);
      } else {
        const CalibrationResult cal = calibrate_nonconvex_params(
            mp.kind, l1_nnz, ds, cell_spec.solver, nu_cv, cell_spec.harness);
        fill_record(rec, cal.result, x_bar, cal.penalty.nu);
      }
    } catch (const DivergenceError& e) {
      mark_diverged(rec, e.iteration);
      if (mp.kind == PenaltyKind::kL1 && !mp.is_lasso) l1_nnz = std::max(1, l1_nnz);
    }
    if (mp.record) out.push_back(std::move(rec));
  }
  return out;
}

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

SweepResult run_sweep(const ExperimentSpec& spec, SweepAxis axis,
                      const std::vector<double>& values, int threads,
                      bool verbose) {
  spec.validate();
  if (values.empty()) throw std::invalid_argument("sweep: no axis values");
  std::vector<ExperimentSpec> cell_specs;
  cell_specs.reserve(values.size());
  for (double v : values) cell_specs.push_back(apply_axis(spec, axis, v));

  const std::vector<MethodPlan> plan = plan_methods(spec);
  const int trials = spec.trials;
  const size_t items = values.size() * static_cast<size_t>(trials);
  std::vector<std::vector<TrialRecord>> slots(items);

  auto work = [&](size_t item) {
    const size_t vi = item / static_cast<size_t>(trials);
    const int trial = static_cast<int>(item % static_cast<size_t>(trials));
    slots[item] = run_item(cell_specs[vi], static_cast<int>(vi), values[vi], trial, plan);
    if (verbose) {
      std::fprintf(stderr, "[sweep] %s=%g trial %d/%d done\n",
                   sweep_axis_name(axis).c_str(), values[vi], trial + 1, trials);
    }
  };

  if (threads <= 1) {
    for (size_t item = 0; item < items; ++item) work(item);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    const int count = std::min<int>(threads, static_cast<int>(items));
    pool.reserve(static_cast<size_t>(count));
    for (int t = 0; t < count; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const size_t item = next.fetch_add(1);
          if (item >= items) return;
          work(item);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  SweepResult result;
  result.axis_name = sweep_axis_name(axis);
  result.axis_values = values;
  result.trials = trials;
  result.spec_digest = spec.digest();
  for (auto& slot : slots)
    for (auto& rec : slot) result.records.push_back(std::move(rec));

  for (size_t vi = 0; vi < values.size(); ++vi) {
    for (const MethodPlan& mp : plan) {
      if (!mp.record) continue;
      std::vector<double> snrs, aes, l2s, times;
      int diverged = 0;
      for (const TrialRecord& rec : result.records) {
        if (rec.axis_index != static_cast<int>(vi) || rec.method != mp.name) continue;
        if (rec.diverged) {
          ++diverged;
          continue;
        }
        snrs.push_back(rec.metrics.snr_db);
        aes.push_back(rec.metrics.angular_error);
        l2s.push_back(rec.metrics.l2_error);
        times.push_back(rec.wall_time);
      }
      CellAggregate agg;
      agg.axis_value = values[vi];
      agg.method = mp.name;
      agg.trials = static_cast<int>(snrs.size());
      agg.diverged = diverged;
      auto mean = [](const std::vector<double>& v) {
        return v.empty() ? std::numeric_limits<double>::quiet_NaN()
                         : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
      };
      agg.snr_mean = mean(snrs);
      agg.snr_std = sample_std(snrs, agg.snr_mean);
      agg.ae_mean = mean(aes);
      agg.ae_std = sample_std(aes, agg.ae_mean);
      agg.l2_mean = mean(l2s);
      agg.l2_std = sample_std(l2s, agg.l2_mean);
      agg.time_mean = mean(times);
      agg.time_std = sample_std(times, agg.time_mean);
      result.aggregates.push_back(std::move(agg));
    }
  }
  return result;
}

void write_sweep_raw_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  char digest[17];
  std::snprintf(digest, sizeof(digest), "%016llx",
                static_cast<unsigned long long>(result.spec_digest));
  out << "spec_digest,axis,axis_value,trial,method,snr_db,angular_error,l2_error,"
         "nnz,iterations,wall_time,converged\n";
  for (const TrialRecord& rec : result.records) {
    out << digest << ',' << result.axis_name << ','
        << csv::format_double(rec.axis_value) << ',' << rec.trial << ',' << rec.method
        << ',' << csv::format_double(rec.metrics.snr_db) << ','
        << csv::format_double(rec.metrics.angular_error) << ','
        << csv::format_double(rec.metrics.l2_error) << ',' << rec.metrics.nnz << ','
        << rec.iterations << ',' << csv::format_double(rec.wall_time) << ','
        << (rec.converged ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

void write_sweep_agg_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  char digest[17];
  std::snprintf(digest, sizeof(digest), "%016llx",
                static_cast<unsigned long long>(result.spec_digest));
  out << "spec_digest,axis,axis_value,method,trials,diverged,snr_mean,snr_std,"
         "ae_mean,ae_std,l2_mean,l2_std,time_mean,time_std\n";
  for (const CellAggregate& agg : result.aggregates) {
    out << digest << ',' << result.axis_name << ','
        << csv::format_double(agg.axis_value) << ',' << agg.method << ','
        << agg.trials << ',' << agg.diverged << ','
        << csv::format_double(agg.snr_mean) << ',' << csv::format_double(agg.snr_std)
        << ',' << csv::format_double(agg.ae_mean) << ','
        << csv::format_double(agg.ae_std) << ',' << csv::format_double(agg.l2_mean)
        << ',' << csv::format_double(agg.l2_std) << ','
        << csv::format_double(agg.time_mean) << ','
        << csv::format_double(agg.time_std) << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

std::vector<TimingRow> run_timing(const ExperimentSpec& spec,
                                  const std::vector<std::pair<int, int>>& cells,
                                  bool verbose) {
  spec.validate();
  if (cells.empty()) throw std::invalid_argument("timing: no (m, n) cells");
  std::vector<TimingRow> rows;

  auto median3 = [](double a, double b, double c) {
    return std::max(std::min(a, b), std::min(std::max(a, b), c));
  };

  for (const auto& [m, n] : cells) {
    ExperimentSpec cell = spec;
    cell.m = m;
    cell.n = n;
    cell.k = std::min(spec.k, n);
    cell.validate();
    const std::vector<MethodPlan> plan = plan_methods(cell);
    std::map<std::string, double> acc;
    for (int trial = 0; trial < cell.trials; ++trial) {
      const SynthResult synth = synthesize(cell, static_cast<std::uint64_t>(trial));
      const SaturatedDataset& ds = synth.dataset;
      const std::vector<double> grid = cv_default_grid(ds.phi1, ds.y1, cell.harness);
      auto rng_folds =
          make_stream(cell.seed, static_cast<std::uint64_t>(trial), Stream::kFolds);
      const double nu_cv =
          cross_validate_nu(ds.phi1, ds.y1, grid, cell.harness.cv_folds, rng_folds);

      int l1_nnz = 1;
      for (const MethodPlan& mp : plan) {
        auto timed = [&](auto&& solve_once) {
          const double t1 = solve_once().wall_time;
          const double t2 = solve_once().wall_time;
          const double t3 = solve_once().wall_time;
          return median3(t1, t2, t3);
        };
        double t = 0.0;
        if (mp.is_lasso) {
          const double nu_lasso = nu_cv * static_cast<double>(ds.m1());
          t = timed([&] { return solve_lasso(ds.phi1, ds.y1, nu_lasso, cell.solver); });
        } else if (mp.kind == PenaltyKind::kL1) {
          const Penalty penalty = Penalty::l1(nu_cv);
          RecoveryResult res = solve_m1bitcsl(ds, penalty, cell.solver);
          l1_nnz = std::max(1, static_cast<int>(nnz(res.x_hat)));
          t = timed([&] { return solve_m1bitcsl(ds, penalty, cell.solver); });
        } else {
          const CalibrationResult cal = calibrate_nonconvex_params(
              mp.kind, l1_nnz, ds, cell.solver, nu_cv, cell.harness);
          t = timed([&] { return solve_m1bitcsl(ds, cal.penalty, cell.solver); });
        }
        if (mp.record) acc[mp.name] += t;
      }
      if (verbose)
        std::fprintf(stderr, "[bench] m=%d n=%d trial %d/%d done\n", m, n, trial + 1,
                     cell.trials);
    }
    for (const MethodPlan& mp : plan) {
      if (!mp.record) continue;
      rows.push_back({m, n, mp.name, acc[mp.name] / cell.trials, cell.trials});
    }
  }
  return rows;
}

void write_timing_csv(const std::vector<TimingRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "m,n,method,mean_time,trials\n";
  for (const TimingRow& r : rows) {
    out << r.m << ',' << r.n << ',' << r.method << ','
        << csv::format_double(r.mean_time) << ',' << r.trials << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

void plot_series(const std::string& agg_csv_path, const std::string& out_dir) {
  std::ifstream in(agg_csv_path);
  if (!in) throw IoError("cannot open " + agg_csv_path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(agg_csv_path + ": empty file");
  const auto header = csv::split_fields(line);
  auto col = [&](const std::string& name) {
    for (size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw IoError(agg_csv_path + ": missing column " + name);
  };
  const size_t c_axis = col("axis_value");
  const size_t c_method = col("method");
  const size_t c_snr = col("snr_mean");
  const size_t c_ae = col("ae_mean");
  const size_t c_time = col("time_mean");

  struct Point {
    double axis, snr, ae, time;
  };
  std::map<std::string, std::vector<Point>> series;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv::split_fields(line);
    if (f.size() != header.size()) throw IoError(agg_csv_path + ": ragged row");
    series[f[c_method]].push_back({csv::parse_double(f[c_axis], agg_csv_path),
                                   csv::parse_double(f[c_snr], agg_csv_path),
                                   csv::parse_double(f[c_ae], agg_csv_path),
                                   csv::parse_double(f[c_time], agg_csv_path)});
  }
  if (series.empty()) throw IoError(agg_csv_path + ": no data rows");

  std::filesystem::create_directories(out_dir);
  auto sanitize = [](const std::string& s) {
    std::string out = s;
    for (char& ch : out)
      if (!std::isalnum(static_cast<unsigned char>(ch))) ch = '_';
    return out;
  };
  for (auto& [method, points] : series) {
    std::sort(points.begin(), points.end(),
              [](const Point& a, const Point& b) { return a.axis < b.axis; });
    const std::string tag = sanitize(method);
    struct Out {
      const char* metric;
      double Point::*field;
    };
    for (const Out& o : {Out{"snr", &Point::snr}, Out{"ae", &Point::ae},
                         Out{"time", &Point::time}}) {
      std::ofstream f(out_dir + "/" + o.metric + "_" + tag + ".csv");
      if (!f) throw IoError("cannot write plot series for " + method);
      f << "axis_value," << o.metric << "_mean\n";
      for (const Point& pt : points)
        f << csv::format_double(pt.axis) << ',' << csv::format_double(pt.*o.field) << '\n';
    }
  }
}

}  // namespace satcs
