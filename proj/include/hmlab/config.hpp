#pragma once

#include <string>

#include "json.hpp"

#include "hmlab/solver.hpp"

namespace hmlab {

struct AnalysisConfig {
  double core_radius = 0.8;
  double mu_floor = 0.01;
  double eps_crit_rel = 1e-10;
};

struct ProblemConfig {
  HarmonicProblem problem;
  AnalysisConfig analysis;
  /// The config with every default filled in; echoed into run summaries.
  nlohmann::json normalized;
};

/// Validates and parses a problem config. Unknown keys, wrong types and
/// out-of-range values raise ConfigError before anything is computed.
ProblemConfig parse_config(const nlohmann::json& j);
ProblemConfig load_config(const std::string& path);

/// Builds a grid from a normalized grid section.
GridPtr make_grid(const nlohmann::json& grid);

}  // namespace hmlab
