#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "types.hpp"

namespace satcs {

enum class NoiseConvention { kSnr, kNsr };
enum class Sl1Generator { kTwoLevel, kLinear };

// Knobs of the experiment harness that are not part of the solver itself.
struct HarnessOptions {
  double mcp_b = 5.0;
  double sl1_top_weight = 0.3;
  Sl1Generator sl1_generator = Sl1Generator::kTwoLevel;
  int cv_folds = 5;
  int cv_grid_size = 20;
  double cv_grid_min_factor = 1e-4;
  void validate() const;
};

struct ExperimentSpec {
  int n = 1000;
  int m = 500;
  int k = 100;
  double noise_level = 10.0;  // signal-variance / noise-variance by default
  NoiseConvention noise_convention = NoiseConvention::kSnr;
  double saturation_ratio = 0.1;
  int trials = 100;
  std::uint64_t seed = 1;
  std::vector<PenaltyKind> penalties = {PenaltyKind::kL1, PenaltyKind::kL0,
                                        PenaltyKind::kMcp, PenaltyKind::kSortedL1};
  SolverConfig solver;
  HarnessOptions harness;

  void validate() const;
  std::string canonical() const;  // fixed-order key=value serialization
  std::uint64_t digest() const;   // FNV-1a over canonical()
};

std::string penalty_kind_name(PenaltyKind kind);
PenaltyKind penalty_kind_from(const std::string& name);

// Config text: one `key = value` per line, `#` comments, unknown keys are
// errors. Throws ConfigError on any parse or validation failure.
ExperimentSpec parse_spec(const std::string& text, const std::string& context = "config");
ExperimentSpec load_spec(const std::string& path);

}  // namespace satcs
