#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "hmlab/analysis.hpp"
#include "hmlab/config.hpp"
#include "hmlab/heinz.hpp"

namespace hmlab::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNumericalError = 2, kRangeError = 3 };

struct Options {
  std::string config;
  std::filesystem::path out = "out";
  int levels = 3;
  /// Base resolution for convergence-study; the config's grid.n when empty.
  std::optional<int> base_n;
  std::optional<cplx> center;
  std::optional<double> core_radius;
  std::optional<double> mu_floor;
  std::optional<double> C;
  double floor = 1e-6;
};

int cmd_solve(const Options& o);
int cmd_analyze(const Options& o);
int cmd_verify_identity(const Options& o);
int cmd_verify_heinz(const Options& o);
int cmd_convergence_study(const Options& o);
int cmd_report(const Options& o);

/// Runs `body`, turning any exception into an error report (stderr and
/// <out>/error.json) and the matching exit code.
int guarded(const std::filesystem::path& out, const std::string& command, int (*body)(const Options&),
            const Options& o);

int exit_code(ErrorClass c);
/// Short kebab-case name of an exception's type, e.g. "range-violation".
std::string error_kind(const std::exception& e);
nlohmann::json error_report(const std::string& command, const std::exception& e);

/// Parses "re,im".
cplx parse_point(const std::string& text);

// Pieces shared by the commands and by the acceptance checks.

struct Run {
  ProblemConfig config;
  ComplexField f;
};

/// Loads <dir>/summary.json and <dir>/field.csv.
Run load_run(const std::filesystem::path& dir);

AnalysisOptions analysis_options(const AnalysisConfig& a);

/// Sign of the target curvature for builtin metrics; empty for custom ones.
std::optional<int> curvature_sign(const MetricDensity& m);

/// u = -log|mu_f|, undefined where mu is undefined or zero.
RealField log_dilatation_potential(const ComplexField& f, double eps_crit_rel);

struct HeinzChain {
  HeinzCertificate certificate;
  bool positivity = false;
  bool C_estimated = true;
};

/// estimate_C over the core, then the certificate at `center` (default: the
/// core node of largest |mu|) with d the distance to the domain boundary.
HeinzChain heinz_chain(const ComplexField& f, const AnalysisConfig& a, std::optional<cplx> center,
                       std::optional<double> C, double floor);

nlohmann::json to_json(cplx z);
nlohmann::json to_json(const AnalysisReport& r, const MetricDensity& m, int declared_degree);
nlohmann::json to_json(const HeinzCertificate& c);

/// Hard invariants of an analysis: the |mu| bound for degree-1 maps, and
/// Lewy positivity for euclidean targets on the disk.
nlohmann::json invariants(const AnalysisReport& r, const MetricDensity& m, const Grid& g, int declared_degree);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace hmlab::cli
