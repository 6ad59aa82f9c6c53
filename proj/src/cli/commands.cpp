#include <cmath>
#include <fstream>
#include <iostream>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "hmlab/cli.hpp"
#include "hmlab/solver.hpp"

namespace hmlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_field(const fs::path& path, const auto& field) {
  std::ofstream os(path);
  if (!os) throw InvalidInput("cannot write '" + path.string() + "'");
  write_csv(os, field);
}

void prepare_out(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw InvalidInput("cannot create output directory '" + out.string() + "'");
}

AnalysisConfig with_overrides(AnalysisConfig a, const Options& o) {
  if (o.core_radius) a.core_radius = *o.core_radius;
  if (o.mu_floor) a.mu_floor = *o.mu_floor;
  if (!(a.core_radius > 0.0)) throw InvalidInput("--core-radius must be positive");
  if (!(a.mu_floor > 0.0)) throw InvalidInput("--mu-floor must be positive");
  return a;
}

json analysis_config_json(const AnalysisConfig& a) {
  return {{"core_radius", a.core_radius}, {"mu_floor", a.mu_floor}, {"eps_crit_rel", a.eps_crit_rel}};
}

json analysis_artifact(const Run& run, const AnalysisConfig& a, const AnalysisReport& r) {
  json j = to_json(r, run.config.problem.metric, run.config.problem.boundary.declared_degree());
  j["analysis_config"] = analysis_config_json(a);
  return j;
}

}  // namespace

int cmd_solve(const Options& o) {
  const ProblemConfig cfg = load_config(o.config);
  prepare_out(o.out);
  const SolveResult r = solve_tension(cfg.problem);
  write_field(o.out / "field.csv", r.f);

  json summary{{"command", "solve"},
               {"config", cfg.normalized},
               {"status", r.converged ? "converged" : "max-iterations"},
               {"converged", r.converged},
               {"iterations", r.iterations},
               {"inner_sweeps", r.inner_sweeps},
               {"final_residual", r.residual_history.empty() ? 0.0 : r.residual_history.back()},
               {"residual_history", r.residual_history},
               {"energy_history", r.energy_history},
               {"warnings", r.warnings},
               {"conventions", conventions()},
               {"field", "field.csv"}};
  write_json(o.out / "summary.json", summary);
  return r.converged ? kOk : kNumericalError;
}

int cmd_analyze(const Options& o) {
  const Run run = load_run(o.out);
  const AnalysisConfig a = with_overrides(run.config.analysis, o);
  const AnalysisReport r = analyze(run.f, run.config.problem.metric, analysis_options(a));

  const json j = analysis_artifact(run, a, r);
  write_json(o.out / "analysis.json", j);
  write_field(o.out / "mu.csv", r.mu);
  write_field(o.out / "jacobian.csv", r.jacobian);
  write_field(o.out / "distortion.csv", r.distortion);
  write_field(o.out / "hopf.csv", r.hopf);
  write_field(o.out / "identity.csv", r.identity_field);

  for (const auto& [name, check] : j.at("invariants").items()) {
    if (check.at("status") == "fail") {
      fmt::print(std::cerr, "hard invariant failed: {}\n", name);
      return kNumericalError;
    }
  }
  return kOk;
}

int cmd_verify_identity(const Options& o) {
  const Run run = load_run(o.out);
  const AnalysisConfig a = with_overrides(run.config.analysis, o);
  IdentityOptions io;
  io.mu_floor = a.mu_floor;
  io.eps_crit_rel = a.eps_crit_rel;
  io.region = Region{2, a.core_radius};
  const IdentityResult r = identity_residual(run.f, run.config.problem.metric, io);
  write_json(o.out / "identity.json", {{"metric", to_string(run.config.problem.metric.kind())},
                                       {"residual_sup", r.sup},
                                       {"support", r.support},
                                       {"mu_floor", io.mu_floor},
                                       {"eps_crit_rel", io.eps_crit_rel},
                                       {"critical_exclusion_h", io.critical_exclusion},
                                       {"core_radius", a.core_radius}});
  return kOk;
}

int cmd_verify_heinz(const Options& o) {
  const Run run = load_run(o.out);
  const AnalysisConfig a = with_overrides(run.config.analysis, o);
  const HeinzChain chain = heinz_chain(run.f, a, o.center, o.C, o.floor);
  write_json(o.out / "heinz.json", {{"field", "-log|mu|"},
                                    {"certificate", to_json(chain.certificate)},
                                    {"C_source", chain.C_estimated ? "estimated" : "override"},
                                    {"floor", o.floor},
                                    {"core_radius", a.core_radius},
                                    {"positivity_conclusion", chain.positivity}});
  return kOk;
}

namespace {

struct Level {
  int n = 0;
  double h = 0.0;
  std::string status = "converged";
  int iterations = 0;
  double final_residual = 0.0;
  std::optional<ComplexField> f;
  std::optional<double> self_diff, hopf, hopf_tension, identity;
  std::size_t identity_support = 0;
};

// Values this small are rounding noise; an order between them means nothing.
constexpr double kNoiseFloor = 1e-12;

std::optional<double> order(const std::optional<double>& coarse, const std::optional<double>& fine) {
  if (!coarse || !fine || *coarse < kNoiseFloor || *fine < kNoiseFloor) return std::nullopt;
  return std::log2(*coarse / *fine);
}

/// sup |coarse - fine| over coarse interior nodes in |z| <= radius; the fine
/// grid halves h over the same origin.
double self_difference(const ComplexField& coarse, const ComplexField& fine, double radius) {
  const Grid& gc = coarse.grid();
  const Grid& gf = fine.grid();
  const Region region{1, radius};
  double m = 0.0;
  for (std::size_t k = 0; k < gc.size(); ++k) {
    if (!region.contains(gc, k)) continue;
    const std::size_t kf = gf.index(2 * gc.col(k), 2 * gc.row(k));
    m = std::max(m, std::abs(coarse[k] - fine[kf]));
  }
  return m;
}

std::string cell(const std::optional<double>& v) { return v ? fmt::format("{:.17g}", *v) : std::string(); }

json jnum(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

int cmd_convergence_study(const Options& o) {
  const ProblemConfig base = load_config(o.config);
  if (o.levels < 3) throw InvalidInput("--levels must be at least 3");
  prepare_out(o.out);

  json grid = base.normalized.at("grid");
  const bool disk = grid.at("domain") == "disk";
  int n0 = o.base_n.value_or(disk ? grid.at("n").get<int>() : grid.at("nx").get<int>());
  const AnalysisConfig a = with_overrides(base.analysis, o);
  const Region core{2, a.core_radius};

  std::vector<Level> levels;
  bool failed = false;
  for (int l = 0; l < o.levels && !failed; ++l) {
    json cfg = base.normalized;
    const int scale = 1 << l;
    if (disk) {
      cfg["grid"]["n"] = (n0 - 1) * scale + 1;
    } else {
      cfg["grid"]["nx"] = (grid.at("nx").get<int>() - 1) * scale + 1;
      cfg["grid"]["ny"] = (grid.at("ny").get<int>() - 1) * scale + 1;
      cfg["grid"]["h"] = grid.at("h").get<double>() / scale;
    }
    const ProblemConfig pc = parse_config(cfg);
    Level lv;
    lv.n = disk ? cfg["grid"]["n"].get<int>() : cfg["grid"]["nx"].get<int>();
    lv.h = pc.problem.grid->h();
    try {
      SolveResult r = solve_tension(pc.problem);
      lv.iterations = r.iterations;
      lv.final_residual = r.residual_history.empty() ? 0.0 : r.residual_history.back();
      if (!r.converged) {
        lv.status = "max-iterations";
        failed = true;
      } else {
        const MetricDensity& m = pc.problem.metric;
        lv.hopf = holomorphy_residual(hopf(r.f, m), core, differential_zero_level(r.f, m, core, 2));
        lv.hopf_tension =
            holomorphy_residual(hopf_for_tension(r.f, m), core, differential_zero_level(r.f, m, core, 1));
        IdentityOptions io;
        io.mu_floor = a.mu_floor;
        io.eps_crit_rel = a.eps_crit_rel;
        io.region = core;
        try {
          const IdentityResult id = identity_residual(r.f, m, io);
          lv.identity = id.sup;
          lv.identity_support = id.support;
        } catch (const InsufficientSupport&) {
          // No node has |mu| above the floor, e.g. a conformal solution.
        }
        lv.f = std::move(r.f);
      }
    } catch (const Error& e) {
      if (e.error_class() == ErrorClass::input) throw;
      lv.status = error_kind(e);
      failed = true;
    }
    levels.push_back(std::move(lv));
  }

  for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
    if (levels[l].f && levels[l + 1].f) {
      levels[l].self_diff = self_difference(*levels[l].f, *levels[l + 1].f, a.core_radius);
    }
  }

  std::ofstream csv(o.out / "convergence.csv");
  if (!csv) throw InvalidInput("cannot write convergence.csv");
  csv << "level,n,h,status,iterations,final_residual,self_diff,self_diff_order,hopf_residual,hopf_order,"
         "hopf_tension_residual,hopf_tension_order,identity_residual,identity_order,identity_support\n";
  json rows = json::array();
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const Level& lv = levels[l];
    const Level* prev = l > 0 ? &levels[l - 1] : nullptr;
    const auto sd_order = prev ? order(prev->self_diff, lv.self_diff) : std::nullopt;
    const auto hopf_order = prev ? order(prev->hopf, lv.hopf) : std::nullopt;
    const auto tension_order = prev ? order(prev->hopf_tension, lv.hopf_tension) : std::nullopt;
    const auto id_order = prev ? order(prev->identity, lv.identity) : std::nullopt;
    fmt::print(csv, "{},{},{:.17g},{},{},{:.17g},{},{},{},{},{},{},{},{},{}\n", l, lv.n, lv.h, lv.status,
               lv.iterations, lv.final_residual, cell(lv.self_diff), cell(sd_order), cell(lv.hopf), cell(hopf_order),
               cell(lv.hopf_tension), cell(tension_order), cell(lv.identity), cell(id_order), lv.identity_support);
    rows.push_back({{"level", l},
                    {"n", lv.n},
                    {"h", lv.h},
                    {"status", lv.status},
                    {"iterations", lv.iterations},
                    {"final_residual", lv.final_residual},
                    {"self_diff", jnum(lv.self_diff)},
                    {"self_diff_order", jnum(sd_order)},
                    {"hopf_residual", jnum(lv.hopf)},
                    {"hopf_order", jnum(hopf_order)},
                    {"hopf_tension_residual", jnum(lv.hopf_tension)},
                    {"hopf_tension_order", jnum(tension_order)},
                    {"identity_residual", jnum(lv.identity)},
                    {"identity_order", jnum(id_order)},
                    {"identity_support", lv.identity_support}});
  }
  write_json(o.out / "convergence.json", {{"command", "convergence-study"},
                                          {"config", base.normalized},
                                          {"levels", o.levels},
                                          {"core_radius", a.core_radius},
                                          {"noise_floor", kNoiseFloor},
                                          {"complete", !failed},
                                          {"rows", rows}});
  return failed ? kNumericalError : kOk;
}

int cmd_report(const Options& o) {
  std::vector<std::string> missing;
  for (const char* name : {"summary.json", "field.csv", "analysis.json"}) {
    if (!fs::exists(o.out / name)) missing.emplace_back(name);
  }
  if (!missing.empty()) {
    const json err{{"command", "report"},
                   {"error", "missing-artifacts"},
                   {"message", "run directory lacks required artifacts"},
                   {"missing", missing},
                   {"exit_code", kInputError}};
    std::cerr << err.dump(2) << '\n';
    prepare_out(o.out);
    write_json(o.out / "error.json", err);
    return kInputError;
  }

  const json summary = read_json(o.out / "summary.json");
  const json stored = read_json(o.out / "analysis.json");
  const Run run = load_run(o.out);
  AnalysisConfig a = run.config.analysis;
  if (stored.contains("analysis_config")) {
    const json& ac = stored.at("analysis_config");
    a.core_radius = ac.value("core_radius", a.core_radius);
    a.mu_floor = ac.value("mu_floor", a.mu_floor);
    a.eps_crit_rel = ac.value("eps_crit_rel", a.eps_crit_rel);
  }
  a = with_overrides(a, o);

  json report{{"command", "report"},
              {"config", run.config.normalized},
              {"solve",
               {{"status", summary.value("status", "unknown")},
                {"iterations", summary.value("iterations", 0)},
                {"final_residual", summary.value("final_residual", 0.0)}}}};

  std::size_t bad = 0;
  for (std::size_t k = 0; k < run.f.size(); ++k) {
    if (run.f.grid().defined(k) && !is_finite(run.f[k])) ++bad;
  }
  const char* sections[] = {"lewy_check", "quasiregularity", "max_principle", "identity", "hopf", "heinz"};
  if (bad > 0) {
    for (const char* s : sections) report[s] = {{"status", "invalid-input"}, {"non_finite_nodes", bad}};
    report["analysis"] = nullptr;
    report["analysis_matches_artifact"] = nullptr;
    write_json(o.out / "report.json", report);
    return kNumericalError;
  }

  const MetricDensity& m = run.config.problem.metric;
  const int degree = run.config.problem.boundary.declared_degree();
  const AnalysisReport r = analyze(run.f, m, analysis_options(a));
  const json aj = analysis_artifact(run, a, r);
  report["analysis"] = aj;
  report["analysis_matches_artifact"] = aj == stored;

  bool windings_ok = true;
  for (const auto& [radius, w] : r.windings) windings_ok = windings_ok && w && *w == degree;
  json lewy = aj.at("invariants").at("lewy");
  lewy["windings"] = aj.at("windings");
  lewy["windings_status"] = windings_ok ? "pass" : "fail";
  report["lewy_check"] = lewy;

  json qr = aj.at("invariants").at("mu_bound");
  qr["k_U"] = r.sup_mu_core;
  qr["K"] = aj.at("max_distortion_core");
  report["quasiregularity"] = qr;

  report["max_principle"] = aj.at("max_principle");

  report["identity"] = {{"residual", aj.at("identity_residual")},
                        {"support", r.identity_support},
                        {"status", r.identity_residual ? "computed" : "insufficient-support"}};

  constexpr double kHopfThreshold = 1e-2;
  report["hopf"] = {{"residual", r.hopf_residual},
                    {"tension_residual", r.hopf_tension_residual},
                    {"threshold", kHopfThreshold},
                    {"status", r.hopf_residual <= kHopfThreshold ? "pass" : "fail"}};

  try {
    const HeinzChain chain = heinz_chain(run.f, a, o.center, o.C, o.floor);
    report["heinz"] = {{"certificate", to_json(chain.certificate)},
                       {"C_source", chain.C_estimated ? "estimated" : "override"},
                       {"positivity_conclusion", chain.positivity},
                       {"status", chain.positivity ? "pass" : "fail"}};
  } catch (const Error& e) {
    if (e.error_class() == ErrorClass::input) throw;
    report["heinz"] = {{"status", error_kind(e)}, {"message", e.what()}};
  }

  write_json(o.out / "report.json", report);
  return kOk;
}

}  // namespace hmlab::cli
