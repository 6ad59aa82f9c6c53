#include <cstdlib>
#include <iostream>
#include <string>

#include <omp.h>

#include "CLI11.hpp"

#include "hmlab/cli.hpp"

namespace {

void apply_thread_cap() {
  const char* env = std::getenv("HMLAB_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) {
    std::cerr << "ignoring HMLAB_THREADS='" << env << "': expected a positive integer\n";
    return;
  }
  omp_set_num_threads(static_cast<int>(n));
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hmlab::cli;
  apply_thread_cap();

  CLI::App app{"Harmonic maps between surfaces: solver and diagnostics"};
  app.require_subcommand(1);

  Options o;
  std::string out = "out";
  std::string center;

  auto* solve = app.add_subcommand("solve", "Solve the tension equation; writes field.csv and summary.json");
  auto* analyze = app.add_subcommand("analyze", "Dilatation, Jacobian, Hopf and identity diagnostics of a solved run");
  auto* identity = app.add_subcommand("verify-identity", "Curvature identity residual of a solved run");
  auto* heinz = app.add_subcommand("verify-heinz", "Super-averaging certificate for -log|mu| of a solved run");
  auto* study = app.add_subcommand("convergence-study", "Solve on refined grids and tabulate observed orders");
  auto* report = app.add_subcommand("report", "Consolidated pass/fail report for a run directory");

  for (auto* sub : {solve, study}) sub->add_option("--config", o.config, "Problem config (JSON)")->required();
  for (auto* sub : {solve, analyze, identity, heinz, study, report}) {
    sub->add_option("--out", out, "Run directory")->capture_default_str();
  }
  for (auto* sub : {analyze, identity, heinz, study, report}) {
    sub->add_option("--core-radius", o.core_radius, "Core disk radius for diagnostics");
    sub->add_option("--mu-floor", o.mu_floor, "Exclude nodes with |mu| below this");
  }
  for (auto* sub : {heinz, report}) {
    sub->add_option("--center", center, "Certificate center RE,IM (default: core node of largest |mu|)");
    sub->add_option("--C", o.C, "Inequality constant (default: estimated over the core)");
    sub->add_option("--floor", o.floor, "Ignore u below this when estimating C")->capture_default_str();
  }
  study->add_option("--levels", o.levels, "Number of grid levels")->capture_default_str();
  study->add_option("--n", o.base_n, "Coarsest resolution (default: the config's)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  o.out = out;
  const auto run = [&](const char* name, int (*body)(const Options&)) {
    return guarded(o.out, name, body, o);
  };
  if (!center.empty()) {
    try {
      o.center = parse_point(center);
    } catch (const std::exception& e) {
      std::cerr << error_report("arguments", e).dump(2) << '\n';
      return kInputError;
    }
  }

  if (*solve) return run("solve", cmd_solve);
  if (*analyze) return run("analyze", cmd_analyze);
  if (*identity) return run("verify-identity", cmd_verify_identity);
  if (*heinz) return run("verify-heinz", cmd_verify_heinz);
  if (*study) return run("convergence-study", cmd_convergence_study);
  return run("report", cmd_report);
}
