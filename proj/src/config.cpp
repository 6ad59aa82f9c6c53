#include "hmlab/config.hpp"

#include <fstream>
#include <set>

#include "hmlab/error.hpp"

namespace hmlab {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!ok.count(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

double number(const json& j, const std::string& where, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

long integer(const json& j, const std::string& where, const char* key, long fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return v.get<long>();
}

std::string text(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw ConfigError(where + "." + key + " is required");
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw ConfigError(where + "." + key + " is required");
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError(where + "." + key + " must be an array");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) throw ConfigError(where + "." + key + " must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

json parse_grid(const json& j) {
  const std::string domain = text(j, "grid", "domain");
  if (domain == "disk") {
    only_keys(j, "grid", {"domain", "n"});
    const long n = integer(j, "grid", "n", 129);
    if (n < 9 || n > 4097) throw ConfigError("grid.n must lie in [9, 4097]");
    return {{"domain", "disk"}, {"n", n}};
  }
  if (domain == "rectangle") {
    only_keys(j, "grid", {"domain", "nx", "ny", "origin", "h"});
    const long nx = integer(j, "grid", "nx", 65), ny = integer(j, "grid", "ny", 65);
    if (nx < 9 || ny < 9 || nx > 4097 || ny > 4097) throw ConfigError("grid.nx and grid.ny must lie in [9, 4097]");
    const std::vector<double> origin = j.contains("origin") ? numbers(j, "grid", "origin") : std::vector<double>{-1.0, -1.0};
    if (origin.size() != 2) throw ConfigError("grid.origin must be [x, y]");
    const double h = number(j, "grid", "h", 2.0 / double(nx - 1));
    if (!(h > 0.0)) throw ConfigError("grid.h must be positive");
    return {{"domain", "rectangle"}, {"nx", nx}, {"ny", ny}, {"origin", origin}, {"h", h}};
  }
  throw ConfigError("grid.domain must be 'disk' or 'rectangle'");
}

std::pair<MetricDensity, json> parse_metric(const json& j) {
  const std::string kind = text(j, "metric", "kind");
  try {
    if (kind == "euclidean") {
      only_keys(j, "metric", {"kind"});
      return {MetricDensity::euclidean(), {{"kind", kind}}};
    }
    if (kind == "spherical") {
      only_keys(j, "metric", {"kind"});
      return {MetricDensity::spherical(), {{"kind", kind}}};
    }
    if (kind == "hyperbolic") {
      only_keys(j, "metric", {"kind", "margin"});
      const double margin = number(j, "metric", "margin", MetricDensity::kDefaultHyperbolicMargin);
      return {MetricDensity::hyperbolic(margin), {{"kind", kind}, {"margin", margin}}};
    }
    if (kind == "custom") {
      only_keys(j, "metric", {"kind", "expression", "fd_step", "valid_radius"});
      const std::string expr = text(j, "metric", "expression");
      const double step = number(j, "metric", "fd_step", MetricDensity::kDefaultFdStep);
      json out{{"kind", kind}, {"expression", expr}, {"fd_step", step}};
      double radius = std::numeric_limits<double>::infinity();
      if (j.contains("valid_radius")) {
        radius = number(j, "metric", "valid_radius", radius);
        out["valid_radius"] = radius;
      }
      return {MetricDensity::custom(expr, step, radius), out};
    }
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("metric: ") + e.what());
  }
  throw ConfigError("metric.kind must be euclidean, hyperbolic, spherical or custom");
}

std::pair<BoundaryMap, json> parse_boundary(const json& j) {
  const std::string type = text(j, "boundary", "type");
  try {
    if (type == "identity") {
      only_keys(j, "boundary", {"type", "radius"});
      const double r = number(j, "boundary", "radius", 1.0);
      return {BoundaryMap::identity(r), {{"type", type}, {"radius", r}}};
    }
    if (type == "twist") {
      only_keys(j, "boundary", {"type", "amplitude", "radius"});
      const double a = number(j, "boundary", "amplitude", 0.3);
      const double r = number(j, "boundary", "radius", 1.0);
      return {BoundaryMap::twist(a, r), {{"type", type}, {"amplitude", a}, {"radius", r}}};
    }
    if (type == "samples") {
      only_keys(j, "boundary", {"type", "theta", "values_re", "values_im", "declared_degree"});
      const std::vector<double> theta = numbers(j, "boundary", "theta");
      const std::vector<double> re = numbers(j, "boundary", "values_re");
      const std::vector<double> im = numbers(j, "boundary", "values_im");
      const long degree = integer(j, "boundary", "declared_degree", 1);
      if (re.size() != theta.size() || im.size() != theta.size()) {
        throw ConfigError("boundary: theta, values_re and values_im must have equal length");
      }
      std::vector<cplx> values(theta.size());
      for (std::size_t k = 0; k < theta.size(); ++k) values[k] = cplx(re[k], im[k]);
      return {BoundaryMap::samples(theta, values, static_cast<int>(degree)),
              {{"type", type}, {"theta", theta}, {"values_re", re}, {"values_im", im}, {"declared_degree", degree}}};
    }
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("boundary: ") + e.what());
  }
  throw ConfigError("boundary.type must be identity, twist or samples");
}

}  // namespace

GridPtr make_grid(const json& g) {
  if (g.at("domain") == "disk") return Grid::unit_disk(g.at("n").get<int>());
  const auto origin = g.at("origin").get<std::vector<double>>();
  return Grid::rectangle(g.at("nx").get<int>(), g.at("ny").get<int>(), cplx(origin[0], origin[1]),
                         g.at("h").get<double>());
}

ProblemConfig parse_config(const json& j) {
  only_keys(j, "config", {"grid", "metric", "boundary", "solver", "analysis"});
  for (const char* key : {"grid", "metric", "boundary"}) {
    if (!j.contains(key)) throw ConfigError(std::string("section '") + key + "' is required");
  }
  json grid = parse_grid(j.at("grid"));
  auto [metric, metric_json] = parse_metric(j.at("metric"));
  auto [boundary, boundary_json] = parse_boundary(j.at("boundary"));

  SolverConfig sc;
  const json solver = j.value("solver", json::object());
  only_keys(solver, "solver", {"tol_residual", "max_outer", "damping", "inner_tol", "max_inner_sweeps"});
  sc.tol_residual = number(solver, "solver", "tol_residual", sc.tol_residual);
  sc.max_outer = static_cast<int>(integer(solver, "solver", "max_outer", sc.max_outer));
  sc.damping = number(solver, "solver", "damping", sc.damping);
  sc.inner_tol = number(solver, "solver", "inner_tol", sc.inner_tol);
  const long sweeps = integer(solver, "solver", "max_inner_sweeps", static_cast<long>(sc.max_inner_sweeps));
  if (sweeps < 1) throw ConfigError("solver.max_inner_sweeps must be positive");
  sc.max_inner_sweeps = static_cast<std::size_t>(sweeps);
  try {
    sc.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }

  AnalysisConfig ac;
  const json analysis = j.value("analysis", json::object());
  only_keys(analysis, "analysis", {"core_radius", "mu_floor", "eps_crit_rel"});
  ac.core_radius = number(analysis, "analysis", "core_radius", ac.core_radius);
  ac.mu_floor = number(analysis, "analysis", "mu_floor", ac.mu_floor);
  ac.eps_crit_rel = number(analysis, "analysis", "eps_crit_rel", ac.eps_crit_rel);
  if (!(ac.core_radius > 0.0)) throw ConfigError("analysis.core_radius must be positive");
  if (!(ac.mu_floor > 0.0)) throw ConfigError("analysis.mu_floor must be positive");
  if (!(ac.eps_crit_rel > 0.0)) throw ConfigError("analysis.eps_crit_rel must be positive");

  GridPtr g;
  try {
    g = make_grid(grid);
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }

  json normalized{{"grid", grid},
                  {"metric", metric_json},
                  {"boundary", boundary_json},
                  {"solver",
                   {{"tol_residual", sc.tol_residual},
                    {"max_outer", sc.max_outer},
                    {"damping", sc.damping},
                    {"inner_tol", sc.inner_tol},
                    {"max_inner_sweeps", sc.max_inner_sweeps}}},
                  {"analysis",
                   {{"core_radius", ac.core_radius}, {"mu_floor", ac.mu_floor}, {"eps_crit_rel", ac.eps_crit_rel}}}};
  return ProblemConfig{HarmonicProblem{g, metric, boundary, sc}, ac, normalized};
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

}  // namespace hmlab
