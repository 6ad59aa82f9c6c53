// Acceptance run: one PASS/FAIL line per criterion, followed by indented
// detail lines. Exit status is 0 when the set of failing criteria equals
// kKnownRed, so a regression (or an unexpected fix) turns ctest red while a
// documented failure is still printed as FAIL.
//
// usage: acceptance <hmlab binary> <source root>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "hmlab/analysis.hpp"
#include "hmlab/cli.hpp"
#include "hmlab/config.hpp"
#include "hmlab/heinz.hpp"
#include "hmlab/solver.hpp"

using namespace hmlab;
namespace fs = std::filesystem;

namespace {

// The printed Hopf differential is not holomorphic for curved targets under
// the tension equation the solver implements; see README "Hopf differential".
const std::set<int> kKnownRed{2};

const std::vector<int> kResolutions{65, 129, 257};
const std::vector<std::string> kRegression{"euclidean_twist_0.1", "euclidean_twist_0.3", "euclidean_twist_0.5",
                                           "hyperbolic_twist_0.3", "spherical_twist_0.3", "custom_density"};

fs::path g_root;
fs::path g_binary;

struct Solved {
  ProblemConfig config;
  SolveResult result;
  AnalysisReport report;
};

// Solves are shared between criteria; each (config, n) pair is solved once.
const Solved& solved(const std::string& name, int n) {
  static std::map<std::pair<std::string, int>, std::unique_ptr<Solved>> cache;
  auto& slot = cache[{name, n}];
  if (!slot) {
    auto j = cli::read_json(g_root / "configs" / (name + ".json"));
    j["grid"]["n"] = n;
    ProblemConfig c = parse_config(j);
    SolveResult r = solve_tension(c.problem);
    AnalysisReport a = analyze(r.f, c.problem.metric, cli::analysis_options(c.analysis));
    slot = std::make_unique<Solved>(Solved{std::move(c), std::move(r), std::move(a)});
  }
  return *slot;
}

struct Check {
  bool pass = true;
  std::vector<std::string> lines;

  void expect(bool ok, std::string line) {
    pass = pass && ok;
    lines.push_back((ok ? "ok    " : "FAIL  ") + std::move(line));
  }
  void info(std::string line) { lines.push_back("info  " + std::move(line)); }
};

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

void euclidean_oracle(Check& c) {
  std::vector<double> err;
  for (int n : kResolutions) {
    const Solved& s = solved("euclidean_twist_0.3", n);
    const ComplexField oracle = poisson_extension(s.config.problem.boundary, s.config.problem.grid);
    const double h = s.config.problem.grid->h();
    const double e = sup_norm(s.result.f - oracle, Region{0, 0.8});
    err.push_back(e);
    c.expect(s.result.converged && e <= 5.0 * h * h, fmt::format("n={} sup|solve - poisson| = {:.3e} <= 5h^2 = {:.3e}",
                                                                 n, e, 5.0 * h * h));
  }
  for (std::size_t i = 1; i < err.size(); ++i) {
    const double order = std::log2(err[i - 1] / err[i]);
    c.expect(within(order, 1.7, 2.3), fmt::format("order {}->{} = {:.3f}", kResolutions[i - 1], kResolutions[i], order));
  }
}

void hopf_holomorphy(Check& c) {
  for (const char* name : {"euclidean_twist_0.3", "hyperbolic_twist_0.3", "spherical_twist_0.3"}) {
    std::vector<double> res, tension;
    for (int n : kResolutions) {
      res.push_back(solved(name, n).report.hopf_residual);
      tension.push_back(solved(name, n).report.hopf_tension_residual);
    }
    c.expect(res[1] <= 1e-2, fmt::format("{} residual at 129 = {:.3e} <= 1e-2", name, res[1]));
    for (std::size_t i = 1; i < res.size(); ++i) {
      c.expect(within(res[i - 1] / res[i], 3.0, 5.0), fmt::format("{} ratio {}->{} = {:.3f}", name,
                                                                   kResolutions[i - 1], kResolutions[i],
                                                                   res[i - 1] / res[i]));
    }
    c.info(fmt::format("{} rho^1 differential: {:.3e} {:.3e} {:.3e} (ratios {:.2f}, {:.2f})", name, tension[0],
                       tension[1], tension[2], tension[0] / tension[1], tension[1] / tension[2]));
  }
}

void curvature_identity(Check& c) {
  for (const char* name : {"euclidean_twist_0.3", "hyperbolic_twist_0.3", "spherical_twist_0.3"}) {
    const auto& coarse = solved(name, 129).report;
    const auto& fine = solved(name, 257).report;
    if (!coarse.identity_residual || !fine.identity_residual) {
      c.expect(false, fmt::format("{}: identity residual has insufficient support", name));
      continue;
    }
    const double ratio = *coarse.identity_residual / *fine.identity_residual;
    c.expect(within(ratio, 3.0, 5.0), fmt::format("{} identity {:.3e} -> {:.3e}, ratio {:.3f}", name,
                                                  *coarse.identity_residual, *fine.identity_residual, ratio));
  }
  const auto g = Grid::unit_disk(129);
  const auto affine = ComplexField::sample(g, [](cplx z) { return z + 0.3 * std::conj(z); });
  const IdentityResult r = identity_residual(affine, MetricDensity::euclidean());
  c.expect(r.support > 0 && r.sup <= 1e-10, fmt::format("affine z + 0.3 conj(z) at 129: sup {:.3e} over {} nodes",
                                                        r.sup, r.support));
  // Rounding in mu is amplified by 1/h^2 in the Laplacian, so the floor moves with n.
  for (int n : {65, 257}) {
    const auto gn = Grid::unit_disk(n);
    const auto fn = ComplexField::sample(gn, [](cplx z) { return z + 0.3 * std::conj(z); });
    c.info(fmt::format("affine at {}: sup {:.3e}", n, identity_residual(fn, MetricDensity::euclidean()).sup));
  }
}

void lewy_positivity(Check& c) {
  for (const char* name : {"euclidean_twist_0.1", "euclidean_twist_0.3", "euclidean_twist_0.5"}) {
    for (int n : kResolutions) {
      const auto& r = solved(name, n).report;
      std::string windings;
      bool ok = r.min_jacobian_core > 0.0;
      for (const auto& [radius, w] : r.windings) {
        ok = ok && w && *w == 1;
        windings += fmt::format(" w({})={}", radius, w ? std::to_string(*w) : "?");
      }
      c.expect(ok, fmt::format("{} n={} min J = {:.4e}{}", name, n, r.min_jacobian_core, windings));
    }
  }
}

void quasiregularity(Check& c) {
  for (const auto& name : kRegression) {
    for (int n : kResolutions) {
      const Solved& s = solved(name, n);
      if (!s.result.converged) {
        c.info(fmt::format("{} n={} did not converge; excluded", name, n));
        continue;
      }
      c.expect(s.report.sup_mu_core < 1.0, fmt::format("{} n={} k_U = {:.6f} K = {:.6f}", name, n,
                                                       s.report.sup_mu_core, s.report.max_distortion_core));
    }
  }
}

void extremum_principles(Check& c) {
  for (const char* name : {"spherical_twist_0.3", "hyperbolic_twist_0.3"}) {
    const bool spherical = std::string(name).starts_with("spherical");
    for (int n : kResolutions) {
      const auto& r = solved(name, n).report;
      for (const ExtremumDiagnostic& e : r.extrema) {
        if (spherical) {
          c.expect(e.degenerate || e.max_on_rim, fmt::format("{} n={} r={} argmax |mu| at |z|={:.4f}", name, n,
                                                             e.core_radius, std::abs(e.argmax)));
        } else {
          c.expect(e.degenerate || e.min_on_rim || e.min < 10.0 * r.eps_crit,
                   fmt::format("{} n={} r={} argmin |mu| at |z|={:.4f} (min {:.3e}, 10 eps_crit {:.3e})", name, n,
                               e.core_radius, std::abs(e.argmin), e.min, 10.0 * r.eps_crit));
        }
      }
    }
  }
}

void heinz(Check& c) {
  const double a = heinz_alpha(std::exp(1.0), 1.0);
  c.expect(a == 0.25, fmt::format("alpha(e, 1) = {:.17g}", a));

  std::vector<double> err;
  for (int n : kResolutions) {
    const auto g = Grid::unit_disk(n);
    const auto one = verify_super_average(RealField::sample(g, [](cplx) { return 1.0; }), 0.0, 0.0, 1.0);
    const auto cap = verify_super_average(RealField::sample(g, [](cplx z) { return 1.0 - std::norm(z); }), 0.0, 0.0,
                                          1.0);
    const double e = std::abs(cap.disk_mean() - 0.875);
    err.push_back(e);
    c.expect(one.mean_value_pass.value_or(false) && std::abs(one.disk_mean() - 1.0) <= 1e-12,
             fmt::format("n={} u=1: mean {:.15f}", n, one.disk_mean()));
    c.expect(cap.mean_value_pass.value_or(false) && cap.alpha == 0.5 && (n != 129 || e <= 1e-4),
             fmt::format("n={} u=1-|z|^2: alpha {} mean {:.8f} error {:.3e}", n, cap.alpha, cap.disk_mean(), e));
  }
  for (std::size_t i = 1; i < err.size(); ++i) {
    c.expect(within(err[i - 1] / err[i], 3.0, 5.0), fmt::format("disk quadrature ratio {}->{} = {:.3f}",
                                                                 kResolutions[i - 1], kResolutions[i],
                                                                 err[i - 1] / err[i]));
  }

  for (const auto& name : kRegression) {
    for (int n : kResolutions) {
      const Solved& s = solved(name, n);
      try {
        const auto chain = cli::heinz_chain(s.result.f, s.config.analysis, std::nullopt, std::nullopt, 1e-6);
        c.expect(chain.positivity, fmt::format("{} n={} -log|mu|: C {:.4f} alpha {:.4f} u(center) {:.4f}", name, n,
                                               chain.certificate.C, chain.certificate.alpha,
                                               chain.certificate.u_center));
      } catch (const Error& e) {
        c.expect(false, fmt::format("{} n={}: {}", name, n, e.what()));
      }
    }
  }
}

void degree_arguments(Check& c) {
  const auto g = Grid::unit_disk(129);
  const std::vector<std::pair<std::string, std::function<cplx(cplx)>>> maps{
      {"z", [](cplx z) { return z; }},
      {"z^3", [](cplx z) { return z * z * z; }},
      {"z^2 + 0.4 conj(z)^2", [](cplx z) { return z * z + 0.4 * std::conj(z * z); }}};
  const int expected[] = {1, 3, 2};
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto f = ComplexField::sample(g, maps[i].second);
    for (double r : {0.3, 0.5, 0.7}) {
      const int w = winding_number(f, 0.0, r);
      c.expect(w == expected[i], fmt::format("{} r={}: {}", maps[i].first, r, w));
    }
  }
}

void determinism_and_schemas(Check& c) {
  const std::string cmd = fmt::format("python3 '{}' '{}' '{}' > acceptance_artifacts.log 2>&1",
                                      (g_root / "tests" / "artifacts_check.py").string(), g_binary.string(),
                                      g_root.string());
  const int rc = std::system(cmd.c_str());
  c.expect(rc == 0, fmt::format("artifact check (byte-identical reruns at 1 and 3 threads, schema validation) rc={}, "
                                "log in acceptance_artifacts.log", rc));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <hmlab binary> <source root>\n";
    return 2;
  }
  g_binary = fs::absolute(argv[1]);
  g_root = fs::absolute(argv[2]);

  const std::vector<std::pair<std::string, void (*)(Check&)>> criteria{
      {"euclidean solve matches the Poisson oracle", euclidean_oracle},
      {"Hopf differential holomorphic for all builtin metrics", hopf_holomorphy},
      {"curvature identity converges", curvature_identity},
      {"Lewy positivity and unit winding", lewy_positivity},
      {"quasiregularity bound", quasiregularity},
      {"max/min principles for |mu|", extremum_principles},
      {"Heinz super-averaging chain", heinz},
      {"winding numbers of model maps", degree_arguments},
      {"CLI determinism and schema validity", determinism_and_schemas},
  };

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!c.pass) failed.insert(id);
    std::cout << fmt::format("{} {}: {} ({:.1f} s)\n", c.pass ? "PASS" : "FAIL", id, criteria[i].first, secs);
    for (const auto& line : c.lines) std::cout << "    " << line << "\n";
    std::cout.flush();
  }

  std::cout << fmt::format("{} of {} criteria pass", criteria.size() - failed.size(), criteria.size());
  if (failed == kKnownRed) {
    std::cout << "; failures match the known-red set\n";
    return 0;
  }
  std::cout << "; failures differ from the known-red set\n";
  return 1;
}
