#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <typeinfo>

#include <fmt/core.h>

#include "hmlab/cli.hpp"

namespace hmlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code(ErrorClass c) {
  switch (c) {
    case ErrorClass::input: return kInputError;
    case ErrorClass::numerical: return kNumericalError;
    case ErrorClass::range: return kRangeError;
  }
  return kNumericalError;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config-error";
  if (dynamic_cast<const InvalidMetricRange*>(&e)) return "invalid-metric-range";
  if (dynamic_cast<const InvalidMetric*>(&e)) return "invalid-metric";
  if (dynamic_cast<const InvalidField*>(&e)) return "invalid-field";
  if (dynamic_cast<const UnsupportedDomain*>(&e)) return "unsupported-domain";
  if (dynamic_cast<const InvalidInput*>(&e)) return "invalid-input";
  if (dynamic_cast<const LinearSolverFailure*>(&e)) return "linear-solver-failure";
  if (dynamic_cast<const Stagnation*>(&e)) return "stagnation";
  if (dynamic_cast<const InsufficientSupport*>(&e)) return "insufficient-support";
  if (dynamic_cast<const DegenerateCircle*>(&e)) return "degenerate-circle";
  if (dynamic_cast<const UnresolvedWinding*>(&e)) return "unresolved-winding";
  if (dynamic_cast<const DiskUnresolved*>(&e)) return "disk-unresolved";
  if (dynamic_cast<const DomainError*>(&e)) return "domain-error";
  if (dynamic_cast<const RangeViolation*>(&e)) return "range-violation";
  if (dynamic_cast<const json::exception*>(&e)) return "invalid-json";
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return "io-error";
  return "internal-error";
}

json error_report(const std::string& command, const std::exception& e) {
  int code = kNumericalError;
  if (const auto* err = dynamic_cast<const Error*>(&e)) code = exit_code(err->error_class());
  else if (dynamic_cast<const json::exception*>(&e) || dynamic_cast<const fs::filesystem_error*>(&e)) code = kInputError;

  json j{{"command", command}, {"error", error_kind(e)}, {"message", e.what()}, {"exit_code", code}};
  if (const auto* s = dynamic_cast<const Stagnation*>(&e)) j["residual_history"] = s->history;
  if (const auto* r = dynamic_cast<const RangeViolation*>(&e)) {
    j["node"] = r->node;
    j["value"] = to_json(r->value);
  }
  if (const auto* d = dynamic_cast<const DomainError*>(&e)) j["point"] = to_json(d->point);
  if (const auto* l = dynamic_cast<const LinearSolverFailure*>(&e)) {
    j["sweeps"] = l->sweeps;
    j["final_residual"] = l->final_residual;
  }
  return j;
}

int guarded(const fs::path& out, const std::string& command, int (*body)(const Options&), const Options& o) {
  try {
    return body(o);
  } catch (const std::exception& e) {
    const json report = error_report(command, e);
    std::cerr << report.dump(2) << '\n';
    std::error_code ec;
    fs::create_directories(out, ec);
    if (!ec) {
      std::ofstream os(out / "error.json");
      if (os) os << report.dump(2) << '\n';
    }
    return report.at("exit_code").get<int>();
  }
}

cplx parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw InvalidInput("expected RE,IM but got '" + text + "'");
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InvalidInput("bad number '" + s + "' in '" + text + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw InvalidInput("bad number '" + s + "' in '" + text + "'");
    return v;
  };
  return {num(text.substr(0, comma)), num(text.substr(comma + 1))};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw InvalidInput("cannot write '" + path.string() + "'");
  os << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("cannot read '" + path.string() + "'");
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw InvalidInput("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

Run load_run(const fs::path& dir) {
  const json summary = read_json(dir / "summary.json");
  if (!summary.contains("config")) throw InvalidInput("summary.json has no config");
  ProblemConfig cfg = parse_config(summary.at("config"));
  std::ifstream is(dir / "field.csv");
  if (!is) throw InvalidInput("cannot read '" + (dir / "field.csv").string() + "'");
  ComplexField f = read_complex_csv(is, cfg.problem.grid);
  return Run{std::move(cfg), std::move(f)};
}

AnalysisOptions analysis_options(const AnalysisConfig& a) {
  AnalysisOptions o;
  o.core_radius = a.core_radius;
  o.mu_floor = a.mu_floor;
  o.eps_crit_rel = a.eps_crit_rel;
  return o;
}

std::optional<int> curvature_sign(const MetricDensity& m) {
  switch (m.kind()) {
    case MetricKind::euclidean: return 0;
    case MetricKind::hyperbolic: return -1;
    case MetricKind::spherical: return 1;
    case MetricKind::custom: return std::nullopt;
  }
  return std::nullopt;
}

RealField log_dilatation_potential(const ComplexField& f, double eps_crit_rel) {
  const ComplexField mu = beltrami(f, eps_crit_rel);
  RealField u(f.grid_ptr());
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!mu.defined_at(k)) continue;
    const double a = std::abs(mu[k]);
    if (a > 0.0) u[k] = -std::log(a);
  }
  return u;
}

HeinzChain heinz_chain(const ComplexField& f, const AnalysisConfig& a, std::optional<cplx> center,
                       std::optional<double> C, double floor) {
  const Grid& g = f.grid();
  const RealField u = log_dilatation_potential(f, a.eps_crit_rel);
  const Region core{2, a.core_radius};

  if (!center) {
    double best = -1.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (!core.contains(g, k) || !u.defined_at(k)) continue;
      // Largest |mu| is smallest u.
      const double m = std::exp(-u[k]);
      if (m > best) {
        best = m;
        center = g.point(k);
      }
    }
    if (!center) throw InsufficientSupport("no core node with defined |mu|");
  }

  HeinzChain out;
  out.C_estimated = !C.has_value();
  const double c = C ? *C : estimate_C(u, core, floor);
  if (!(c >= 0.0)) throw InvalidInput("C must be non-negative");
  out.certificate = verify_super_average(u, *center, c, g.distance_to_boundary(*center));
  out.positivity = positivity_conclusion(u, out.certificate);
  return out;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const HeinzCertificate& c) {
  json j{{"center", to_json(c.center)},
         {"C", c.C},
         {"d", c.d},
         {"alpha", c.alpha},
         {"u_center", c.u_center},
         {"disk_integral", c.disk_integral},
         {"disk_mean", c.disk_mean()},
         {"literal_bound", c.literal_bound},
         {"literal_pass", c.literal_pass},
         {"empirical_ratio", c.empirical_ratio}};
  j["mean_value_pass"] = c.mean_value_pass ? json(*c.mean_value_pass) : json(nullptr);
  return j;
}

namespace {

json max_principle(const AnalysisReport& r, const MetricDensity& m) {
  const auto sign = curvature_sign(m);
  json rows = json::array();
  bool all = true;
  for (const ExtremumDiagnostic& e : r.extrema) {
    json row{{"radius", e.core_radius},
             {"degenerate", e.degenerate},
             {"argmax", to_json(e.argmax)},
             {"max", e.max},
             {"max_on_rim", e.max_on_rim},
             {"argmin", to_json(e.argmin)},
             {"min", e.min},
             {"min_on_rim", e.min_on_rim}};
    if (sign) {
      // A constant |mu| satisfies both principles.
      bool pass = e.degenerate;
      if (!pass) {
        pass = true;
        if (*sign >= 0) pass = pass && e.max_on_rim;
        if (*sign <= 0) pass = pass && (e.min_on_rim || e.min < 10.0 * r.eps_crit);
      }
      row["pass"] = pass;
      all = all && pass;
    }
    rows.push_back(row);
  }
  json j{{"field", "abs_mu"}, {"subdisks", rows}};
  if (sign) {
    j["curvature_sign"] = *sign;
    j["status"] = all ? "pass" : "fail";
  } else {
    j["curvature_sign"] = nullptr;
    j["status"] = "not-applicable";
  }
  return j;
}

}  // namespace

json invariants(const AnalysisReport& r, const MetricDensity& m, const Grid& g, int declared_degree) {
  json j;
  if (declared_degree == 1) {
    j["mu_bound"] = {{"sup_mu_core", r.sup_mu_core}, {"status", r.sup_mu_core < 1.0 ? "pass" : "fail"}};
  } else {
    j["mu_bound"] = {{"sup_mu_core", r.sup_mu_core}, {"status", "not-applicable"}};
  }
  const bool lewy = declared_degree == 1 && m.kind() == MetricKind::euclidean && g.domain() == DomainKind::unit_disk;
  j["lewy"] = {{"min_jacobian_core", r.min_jacobian_core},
               {"status", lewy ? (r.min_jacobian_core > 0.0 ? "pass" : "fail") : "not-applicable"}};
  return j;
}

json to_json(const AnalysisReport& r, const MetricDensity& m, int declared_degree) {
  json critical = json::array();
  for (const CriticalPoint& p : r.critical.points) {
    critical.push_back({{"location", to_json(p.location)},
                        {"nodes", p.nodes},
                        {"order", p.order ? json(*p.order) : json(nullptr)}});
  }
  json windings = json::array();
  for (const auto& [radius, w] : r.windings) {
    windings.push_back({{"radius", radius}, {"winding", w ? json(*w) : json(nullptr)}});
  }
  const double inf = std::numeric_limits<double>::infinity();
  json j{{"metric", to_string(m.kind())},
         {"declared_degree", declared_degree},
         {"eps_crit", r.eps_crit},
         {"k_U", r.sup_mu_core},
         // JSON has no infinity; a saturated core reports null.
         {"max_distortion_core", r.max_distortion_core == inf ? json(nullptr) : json(r.max_distortion_core)},
         {"min_jacobian_core", r.min_jacobian_core},
         {"hopf_residual", r.hopf_residual},
         {"hopf_tension_residual", r.hopf_tension_residual},
         {"identity_residual", r.identity_residual ? json(*r.identity_residual) : json(nullptr)},
         {"identity_support", r.identity_support},
         {"saturated_nodes", r.saturated_nodes.size()},
         {"critical_points", critical},
         {"containment_violations", r.critical.containment_violations.size()},
         {"windings", windings},
         {"max_principle", max_principle(r, m)},
         {"invariants", invariants(r, m, r.mu.grid(), declared_degree)},
         {"conventions", r.conventions}};
  return j;
}

}  // namespace hmlab::cli
