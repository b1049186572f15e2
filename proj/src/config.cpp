#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "csv.hpp"

namespace satcs {

void HarnessOptions::validate() const {
  if (!(mcp_b > 0.0) || !std::isfinite(mcp_b))
    throw std::invalid_argument("spec: mcp_b must be positive and finite");
  if (!(sl1_top_weight >= 0.0 && sl1_top_weight <= 1.0))
    throw std::invalid_argument("spec: sl1_top_weight must lie in [0, 1]");
  if (cv_folds < 2) throw std::invalid_argument("spec: cv_folds must be >= 2");
  if (cv_grid_size < 1) throw std::invalid_argument("spec: cv_grid_size must be >= 1");
  if (!(cv_grid_min_factor > 0.0 && cv_grid_min_factor <= 1.0))
    throw std::invalid_argument("spec: cv_grid_min_factor must lie in (0, 1]");
}

void ExperimentSpec::validate() const {
  if (n < 1) throw std::invalid_argument("spec: n must be >= 1");
  if (m < 2) throw std::invalid_argument("spec: m must be >= 2");
  if (k < 1 || k > n) throw std::invalid_argument("spec: need 1 <= k <= n");
  if (!(noise_level > 0.0) || !std::isfinite(noise_level))
    throw std::invalid_argument("spec: noise_level must be positive and finite");
  if (!(saturation_ratio >= 0.0 && saturation_ratio < 1.0))
    throw std::invalid_argument("spec: saturation_ratio must lie in [0, 1)");
  if (std::llround(saturation_ratio * m) >= m)
    throw std::invalid_argument("spec: saturation leaves no unsaturated rows");
  if (trials < 1) throw std::invalid_argument("spec: trials must be >= 1");
  if (penalties.empty()) throw std::invalid_argument("spec: penalty list is empty");
  solver.validate();
  harness.validate();
}

std::string penalty_kind_name(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::kL1: return "l1";
    case PenaltyKind::kL0: return "l0";
    case PenaltyKind::kMcp: return "mcp";
    case PenaltyKind::kSortedL1: return "sl1";
  }
  return "?";
}

PenaltyKind penalty_kind_from(const std::string& name) {
  if (name == "l1") return PenaltyKind::kL1;
  if (name == "l0") return PenaltyKind::kL0;
  if (name == "mcp") return PenaltyKind::kMcp;
  if (name == "sl1") return PenaltyKind::kSortedL1;
  throw std::invalid_argument("unknown penalty '" + name + "' (expected l1, l0, mcp, sl1)");
}

std::string ExperimentSpec::canonical() const {
  std::ostringstream out;
  auto d = [](double v) { return csv::format_double(v); };
  out << "n=" << n << ";m=" << m << ";k=" << k
      << ";noise_level=" << d(noise_level)
      << ";noise_convention=" << (noise_convention == NoiseConvention::kSnr ? "snr" : "nsr")
      << ";saturation_ratio=" << d(saturation_ratio) << ";trials=" << trials
      << ";seed=" << seed << ";penalties=";
  for (size_t i = 0; i < penalties.size(); ++i) {
    if (i) out << ',';
    out << penalty_kind_name(penalties[i]);
  }
  out << ";gamma=" << d(solver.gamma) << ";ball_radius=" << d(solver.ball_radius)
      << ";rho=" << d(solver.rho) << ";eps_abs=" << d(solver.eps_abs)
      << ";eps_rel=" << d(solver.eps_rel) << ";max_iter=" << solver.max_iter
      << ";adaptive_rho=" << (solver.adaptive_rho ? 1 : 0)
      << ";mcp_b=" << d(harness.mcp_b)
      << ";sl1_top_weight=" << d(harness.sl1_top_weight)
      << ";sl1_generator="
      << (harness.sl1_generator == Sl1Generator::kTwoLevel ? "two_level" : "linear")
      << ";cv_folds=" << harness.cv_folds << ";cv_grid_size=" << harness.cv_grid_size
      << ";cv_grid_min_factor=" << d(harness.cv_grid_min_factor);
  return out.str();
}

std::uint64_t ExperimentSpec::digest() const {
  // FNV-1a, 64 bit
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& where) {
  try {
    return csv::parse_double(v, where);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
}

long long to_int(const std::string& v, const std::string& where) {
  try {
    return csv::parse_int(v, where);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
}

bool to_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(where + ": expected true/false, got '" + v + "'");
}

}  // namespace

ExperimentSpec parse_spec(const std::string& text, const std::string& context) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = context + ":" + std::to_string(lineno);
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(where + ": empty key or value");

    if (key == "n") spec.n = static_cast<int>(to_int(value, where));
    else if (key == "m") spec.m = static_cast<int>(to_int(value, where));
    else if (key == "k") spec.k = static_cast<int>(to_int(value, where));
    else if (key == "noise_level") spec.noise_level = to_double(value, where);
    else if (key == "noise_convention") {
      if (value == "snr") spec.noise_convention = NoiseConvention::kSnr;
      else if (value == "nsr") spec.noise_convention = NoiseConvention::kNsr;
      else throw ConfigError(where + ": noise_convention must be snr or nsr");
    } else if (key == "saturation_ratio") spec.saturation_ratio = to_double(value, where);
    else if (key == "trials") spec.trials = static_cast<int>(to_int(value, where));
    else if (key == "seed") spec.seed = static_cast<std::uint64_t>(to_int(value, where));
    else if (key == "penalties") {
      spec.penalties.clear();
      for (const auto& tok : csv::split_fields(value)) {
        try {
          spec.penalties.push_back(penalty_kind_from(trim(tok)));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(where + ": " + e.what());
        }
      }
    } else if (key == "gamma") spec.solver.gamma = to_double(value, where);
    else if (key == "ball_radius") spec.solver.ball_radius = to_double(value, where);
    else if (key == "rho") spec.solver.rho = to_double(value, where);
    else if (key == "eps_abs") spec.solver.eps_abs = to_double(value, where);
    else if (key == "eps_rel") spec.solver.eps_rel = to_double(value, where);
    else if (key == "max_iter") spec.solver.max_iter = static_cast<int>(to_int(value, where));
    else if (key == "adaptive_rho") spec.solver.adaptive_rho = to_bool(value, where);
    else if (key == "mcp_b") spec.harness.mcp_b = to_double(value, where);
    else if (key == "sl1_top_weight") spec.harness.sl1_top_weight = to_double(value, where);
    else if (key == "sl1_generator") {
      if (value == "two_level") spec.harness.sl1_generator = Sl1Generator::kTwoLevel;
      else if (value == "linear") spec.harness.sl1_generator = Sl1Generator::kLinear;
      else throw ConfigError(where + ": sl1_generator must be two_level or linear");
    } else if (key == "cv_folds") spec.harness.cv_folds = static_cast<int>(to_int(value, where));
    else if (key == "cv_grid_size") spec.harness.cv_grid_size = static_cast<int>(to_int(value, where));
    else if (key == "cv_grid_min_factor") spec.harness.cv_grid_min_factor = to_double(value, where);
    else throw ConfigError(where + ": unknown key '" + key + "'");
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(context + ": " + e.what());
  }
  return spec;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str(), path);
}

}  // namespace satcs
