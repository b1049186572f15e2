#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "harness.hpp"
#include "rng.hpp"
#include "synth.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

satcs::ExperimentSpec tiny_spec() {
  satcs::ExperimentSpec spec;
  spec.n = 40;
  spec.m = 30;
  spec.k = 4;
  spec.saturation_ratio = 0.2;
  spec.trials = 3;
  spec.seed = 21;
  spec.penalties = {satcs::PenaltyKind::kL1};
  spec.harness.cv_grid_size = 8;
  spec.harness.cv_folds = 3;
  return spec;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("default cross-validation grid is anchored at the critical level") {
  const auto r = satcs::synthesize(tiny_spec(), 0);
  satcs::HarnessOptions opts;
  opts.cv_grid_size = 12;
  opts.cv_grid_min_factor = 1e-3;
  const auto grid = satcs::cv_default_grid(r.dataset.phi1, r.dataset.y1, opts);
  REQUIRE(grid.size() == 12);
  const double nu_max =
      (r.dataset.phi1.transpose() * r.dataset.y1).lpNorm<Eigen::Infinity>() /
      static_cast<double>(r.dataset.m1());
  CHECK(grid.front() == doctest::Approx(nu_max * 1e-3).epsilon(1e-12));
  CHECK(grid.back() == doctest::Approx(nu_max).epsilon(1e-12));
  CHECK(std::is_sorted(grid.begin(), grid.end()));
}

TEST_CASE("cross-validation picks a grid member deterministically") {
  const auto r = satcs::synthesize(tiny_spec(), 1);
  satcs::HarnessOptions opts;
  opts.cv_grid_size = 10;
  const auto grid = satcs::cv_default_grid(r.dataset.phi1, r.dataset.y1, opts);

  auto rng1 = satcs::make_stream(21, 1, satcs::Stream::kFolds);
  const double nu1 =
      satcs::cross_validate_nu(r.dataset.phi1, r.dataset.y1, grid, 3, rng1);
  auto rng2 = satcs::make_stream(21, 1, satcs::Stream::kFolds);
  const double nu2 =
      satcs::cross_validate_nu(r.dataset.phi1, r.dataset.y1, grid, 3, rng2);
  CHECK(nu1 == nu2);
  CHECK(std::count(grid.begin(), grid.end(), nu1) == 1);

  auto rng3 = satcs::make_stream(21, 1, satcs::Stream::kFolds);
  CHECK_THROWS(satcs::cross_validate_nu(r.dataset.phi1, r.dataset.y1, grid, 1, rng3));
  CHECK_THROWS(satcs::cross_validate_nu(r.dataset.phi1, r.dataset.y1, {}, 3, rng3));
}

TEST_CASE("sorted-l1 weight generators") {
  satcs::HarnessOptions opts;
  opts.sl1_top_weight = 0.3;

  const VectorXd two = satcs::make_sl1_weights(6, 2, opts);
  REQUIRE(two.size() == 6);
  CHECK(two[0] == 1.0);
  CHECK(two[3] == 1.0);
  CHECK(two[4] == 0.3);
  CHECK(two[5] == 0.3);

  opts.sl1_generator = satcs::Sl1Generator::kLinear;
  const VectorXd lin = satcs::make_sl1_weights(5, 2, opts);
  CHECK(lin[0] == doctest::Approx(1.0));
  CHECK(lin[4] == doctest::Approx(0.3));
  for (int i = 0; i + 1 < 5; ++i) CHECK(lin[i] >= lin[i + 1]);
}

TEST_CASE("nonconvex calibration respects the sparsity target") {
  auto spec = tiny_spec();
  const auto r = satcs::synthesize(spec, 0);
  satcs::SolverConfig config = spec.solver;
  config.gamma = 0.1;

  for (auto kind : {satcs::PenaltyKind::kL0, satcs::PenaltyKind::kMcp,
                    satcs::PenaltyKind::kSortedL1}) {
    const auto cal = satcs::calibrate_nonconvex_params(kind, 6, r.dataset, config,
                                                       0.001, spec.harness);
    CHECK(cal.penalty.kind == kind);
    CHECK(cal.penalty.nu >= 0.001);
    int nnz = 0;
    for (Eigen::Index i = 0; i < cal.result.x_hat.size(); ++i)
      if (std::abs(cal.result.x_hat[i]) > 1e-8) ++nnz;
    CHECK(nnz <= 6);
  }
  CHECK_THROWS(satcs::calibrate_nonconvex_params(satcs::PenaltyKind::kL1, 6,
                                                 r.dataset, config, 0.001,
                                                 spec.harness));
}

TEST_CASE("sweep axes apply to the right field") {
  const auto spec = tiny_spec();
  const auto s1 =
      satcs::apply_axis(spec, satcs::SweepAxis::kSaturationRatio, 0.35);
  CHECK(s1.saturation_ratio == 0.35);
  const auto s2 = satcs::apply_axis(spec, satcs::SweepAxis::kM, 24.0);
  CHECK(s2.m == 24);
  const auto s3 = satcs::apply_axis(spec, satcs::SweepAxis::kK, 6.0);
  CHECK(s3.k == 6);
  CHECK_THROWS(satcs::apply_axis(spec, satcs::SweepAxis::kSaturationRatio, 1.5));
  CHECK(satcs::sweep_axis_from("m") == satcs::SweepAxis::kM);
  CHECK_THROWS(satcs::sweep_axis_from("bogus"));
}

TEST_CASE("sweep produces one record per (value, trial, method) and aggregates") {
  const auto spec = tiny_spec();
  const std::vector<double> values = {0.0, 0.2};
  const auto result = satcs::run_sweep(spec, satcs::SweepAxis::kSaturationRatio,
                                       values, 1, false);
  // lasso + the L1 solver, two axis values, three trials
  CHECK(result.records.size() == 2 * 3 * 2);
  CHECK(result.aggregates.size() == 2 * 2);
  CHECK(result.axis_values == values);
  CHECK(result.spec_digest == spec.digest());

  for (const auto& agg : result.aggregates) {
    CHECK(agg.trials == 3);
    CHECK(agg.diverged == 0);
  }

  // Records arrive in deterministic slot order regardless of thread count.
  const auto threaded = satcs::run_sweep(spec, satcs::SweepAxis::kSaturationRatio,
                                         values, 2, false);
  REQUIRE(threaded.records.size() == result.records.size());
  for (size_t i = 0; i < result.records.size(); ++i) {
    const auto& a = result.records[i];
    const auto& b = threaded.records[i];
    CHECK(a.method == b.method);
    CHECK(a.trial == b.trial);
    CHECK(a.axis_index == b.axis_index);
    CHECK(a.metrics.snr_db == b.metrics.snr_db);
    CHECK(a.metrics.l2_error == b.metrics.l2_error);
    CHECK(a.nu == b.nu);
    CHECK(a.iterations == b.iterations);
  }
}

TEST_CASE("sweep csv files carry the expected schema") {
  const auto spec = tiny_spec();
  const auto result = satcs::run_sweep(spec, satcs::SweepAxis::kSaturationRatio,
                                       {0.2}, 1, false);
  const auto dir = std::filesystem::temp_directory_path() / "satcs_sweep_csv";
  std::filesystem::create_directories(dir);
  const auto raw_path = (dir / "sweep_raw.csv").string();
  const auto agg_path = (dir / "sweep_agg.csv").string();
  satcs::write_sweep_raw_csv(result, raw_path);
  satcs::write_sweep_agg_csv(result, agg_path);

  const auto raw = read_lines(raw_path);
  CHECK(raw[0] ==
        "spec_digest,axis,axis_value,trial,method,snr_db,angular_error,l2_error,"
        "nnz,iterations,wall_time,converged");
  CHECK(raw.size() == 1 + result.records.size());
  // digest renders as 16 hex characters
  const auto first = raw[1].substr(0, raw[1].find(','));
  CHECK(first.size() == 16);

  const auto agg = read_lines(agg_path);
  CHECK(agg[0] ==
        "spec_digest,axis,axis_value,method,trials,diverged,snr_mean,snr_std,"
        "ae_mean,ae_std,l2_mean,l2_std,time_mean,time_std");
  CHECK(agg.size() == 1 + result.aggregates.size());

  satcs::plot_series(agg_path, dir.string());
  CHECK(std::filesystem::exists(dir / "snr_lasso.csv"));
  CHECK(std::filesystem::exists(dir / "snr_alg1_l1.csv"));
  const auto series = read_lines((dir / "snr_alg1_l1.csv").string());
  CHECK(series[0] == "axis_value,snr_mean");
  CHECK(series.size() == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("timing harness reports per-method means") {
  auto spec = tiny_spec();
  spec.trials = 2;
  const auto rows = satcs::run_timing(spec, {{24, 36}}, false);
  REQUIRE(rows.size() == 2);  // lasso + alg1-l1
  for (const auto& row : rows) {
    CHECK(row.m == 24);
    CHECK(row.n == 36);
    CHECK(row.trials == 2);
    CHECK(row.mean_time >= 0.0);
  }
  CHECK(rows[0].method == "lasso");
  CHECK(rows[1].method == "alg1-l1");

  const auto path =
      (std::filesystem::temp_directory_path() / "satcs_timing.csv").string();
  satcs::write_timing_csv(rows, path);
  const auto lines = read_lines(path);
  CHECK(lines[0] == "m,n,method,mean_time,trials");
  CHECK(lines.size() == 3);
  std::filesystem::remove(path);
}

TEST_CASE("experiment spec digest tracks content") {
  const auto a = tiny_spec();
  auto b = a;
  CHECK(a.digest() == b.digest());
  b.k = 5;
  CHECK(a.digest() != b.digest());
  auto c = a;
  c.solver.gamma = 0.25;
  CHECK(a.digest() != c.digest());
}

TEST_CASE("config text round-trips through the parser") {
  const std::string text =
      "# comment\n"
      "n = 50\n"
      "m = 44\n"
      "k = 6\n"
      "noise_level = 5\n"
      "noise_convention = nsr\n"
      "saturation_ratio = 0.25\n"
      "trials = 2\n"
      "seed = 77\n"
      "penalties = l1, mcp\n"
      "gamma = 0.05\n"
      "ball_radius = 2\n"
      "max_iter = 500\n"
      "mcp_b = 4\n"
      "cv_folds = 4\n";
  const auto spec = satcs::parse_spec(text);
  CHECK(spec.n == 50);
  CHECK(spec.m == 44);
  CHECK(spec.noise_convention == satcs::NoiseConvention::kNsr);
  CHECK(spec.seed == 77);
  REQUIRE(spec.penalties.size() == 2);
  CHECK(spec.penalties[1] == satcs::PenaltyKind::kMcp);
  CHECK(spec.solver.gamma == 0.05);
  CHECK(spec.solver.ball_radius == 2.0);
  CHECK(spec.solver.max_iter == 500);
  CHECK(spec.harness.mcp_b == 4.0);
  CHECK(spec.harness.cv_folds == 4);

  CHECK_THROWS_AS(satcs::parse_spec("unknown_key = 1\n"), satcs::ConfigError);
  CHECK_THROWS_AS(satcs::parse_spec("n = -3\n"), satcs::ConfigError);
  CHECK_THROWS_AS(satcs::parse_spec("n 50\n"), satcs::ConfigError);
  CHECK_THROWS_AS(satcs::parse_spec("penalties = l1, bogus\n"), satcs::ConfigError);
}
