#include "hmlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "hmlab/kernels.hpp"

namespace hmlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Derivatives {
  std::vector<cplx> dz, dzbar;
};

Derivatives derivatives(const ComplexField& f) {
  const Grid& g = f.grid();
  Derivatives d{std::vector<cplx>(g.size()), std::vector<cplx>(g.size())};
  kernels::parallel::wirtinger(g, f.values(), d.dz, d.dzbar);
  return d;
}

double sup_defined(const Grid& g, const std::vector<cplx>& v) {
  double m = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.defined(k) && is_finite(v[k])) m = std::max(m, std::abs(v[k]));
  return m;
}

ComplexField mu_from(const ComplexField& f, const Derivatives& d, double eps) {
  const Grid& g = f.grid();
  ComplexField mu(f.grid_ptr());
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.defined(k) || !is_finite(d.dz[k]) || std::abs(d.dz[k]) < eps) continue;
    mu[k] = d.dzbar[k] / d.dz[k];
  }
  return mu;
}

}  // namespace

double eps_crit(const ComplexField& f, double rel) {
  const Derivatives d = derivatives(f);
  return rel * sup_defined(f.grid(), d.dz);
}

ComplexField beltrami(const ComplexField& f, double eps_crit_rel) {
  f.require_defined("beltrami");
  const Derivatives d = derivatives(f);
  return mu_from(f, d, eps_crit_rel * sup_defined(f.grid(), d.dz));
}

RealField jacobian(const ComplexField& f) {
  f.require_defined("jacobian");
  const Derivatives d = derivatives(f);
  RealField j(f.grid_ptr());
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f.grid().defined(k)) j[k] = std::norm(d.dz[k]) - std::norm(d.dzbar[k]);
  return j;
}

RealField distortion_of_mu(const ComplexField& mu, std::vector<std::size_t>* saturated) {
  RealField out(mu.grid_ptr());
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (!mu.grid().defined(k) || !is_finite(mu[k])) continue;
    const double a2 = std::norm(mu[k]);
    if (a2 >= 1.0) {
      out[k] = std::numeric_limits<double>::infinity();
      if (saturated != nullptr) saturated->push_back(k);
    } else {
      out[k] = (1.0 + a2) / (1.0 - a2);
    }
  }
  return out;
}

RealField distortion(const ComplexField& f, std::vector<std::size_t>* saturated) {
  return distortion_of_mu(beltrami(f), saturated);
}

ComplexField hopf(const ComplexField& f, const MetricDensity& m) {
  f.require_defined("hopf");
  const Derivatives d = derivatives(f);
  ComplexField phi(f.grid_ptr());
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!f.grid().defined(k)) continue;
    const double rho = m.rho(f[k]);
    phi[k] = rho * rho * d.dz[k] * std::conj(d.dzbar[k]);
  }
  return phi;
}

ComplexField hopf_for_tension(const ComplexField& f, const MetricDensity& m) {
  f.require_defined("hopf_for_tension");
  const Derivatives d = derivatives(f);
  ComplexField phi(f.grid_ptr());
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f.grid().defined(k)) phi[k] = m.rho(f[k]) * d.dz[k] * std::conj(d.dzbar[k]);
  }
  return phi;
}

double differential_zero_level(const ComplexField& f, const MetricDensity& m, const Region& region, int power) {
  f.require_defined("differential_zero_level");
  const Derivatives d = derivatives(f);
  double scale = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!region.contains(f.grid(), k)) continue;
    const double w = std::pow(m.rho(f[k]), power);
    scale = std::max(scale, w * (std::norm(d.dz[k]) + std::norm(d.dzbar[k])));
  }
  return kZeroDifferentialRel * scale;
}

double holomorphy_residual(const ComplexField& phi, const Region& region, double zero_level) {
  const Grid& g = phi.grid();
  phi.require_interior("holomorphy_residual");
  const Derivatives d = derivatives(phi);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!region.contains(g, k)) continue;
    if (!is_finite(d.dzbar[k])) throw InvalidField("holomorphy_residual: undefined derivative in the region");
    num = std::max(num, std::abs(d.dzbar[k]));
    den = std::max(den, std::abs(phi[k]));
  }
  if (den <= zero_level) return 0.0;
  return num / (den + 1e-300);
}

cplx bilinear(const ComplexField& f, cplx z) {
  const Grid& g = f.grid();
  const double fx = (z.real() - g.origin().real()) / g.h();
  const double fy = (z.imag() - g.origin().imag()) / g.h();
  if (!std::isfinite(fx) || !std::isfinite(fy)) throw InvalidInput("bilinear: point is not finite");
  const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.nx() - 2);
  const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g.ny() - 2);
  const double s = fx - i, t = fy - j;
  if (s < -1e-9 || s > 1.0 + 1e-9 || t < -1e-9 || t > 1.0 + 1e-9) throw InvalidInput("bilinear: point is off the grid");
  const std::size_t k00 = g.index(i, j), k10 = g.index(i + 1, j), k01 = g.index(i, j + 1), k11 = g.index(i + 1, j + 1);
  for (std::size_t k : {k00, k10, k01, k11}) {
    if (!f.defined_at(k)) throw InvalidInput("bilinear: enclosing cell is not fully defined");
  }
  return (1 - s) * (1 - t) * f[k00] + s * (1 - t) * f[k10] + (1 - s) * t * f[k01] + s * t * f[k11];
}

int winding_number(const ComplexField& f, cplx center, double radius) {
  if (!(radius > 0.0)) throw InvalidInput("winding radius must be positive");
  const double h = f.grid().h();
  const cplx fc = bilinear(f, center);
  std::size_t n = std::max<std::size_t>(64, 8 * static_cast<std::size_t>(std::ceil(kTwoPi * radius / h)));
  constexpr std::size_t kMaxSamples = 1u << 16;
  for (;;) {
    std::vector<cplx> v(n);
    double vmax = 0.0, vmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      v[j] = bilinear(f, center + std::polar(radius, kTwoPi * double(j) / double(n))) - fc;
      vmax = std::max(vmax, std::abs(v[j]));
      vmin = std::min(vmin, std::abs(v[j]));
    }
    if (!(vmax > 0.0) || vmin <= 1e-10 * vmax) {
      throw DegenerateCircle("f comes within rounding of f(center) on the circle");
    }
    double turn = 0.0, largest = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double step = std::arg(v[(j + 1) % n] / v[j]);
      turn += step;
      largest = std::max(largest, std::abs(step));
    }
    if (largest > std::numbers::pi / 3.0 && n < kMaxSamples) {
      n *= 2;
      continue;
    }
    const double w = turn / kTwoPi;
    const double rounded = std::round(w);
    if (std::abs(w - rounded) > 0.1) {
      throw UnresolvedWinding("argument sum " + std::to_string(w) + " is not near an integer");
    }
    return static_cast<int>(rounded);
  }
}

CriticalPointReport critical_points(const ComplexField& f, double eps_crit_rel) {
  f.require_defined("critical_points");
  const Grid& g = f.grid();
  const Derivatives d = derivatives(f);
  const double eps = eps_crit_rel * sup_defined(g, d.dz);

  std::vector<char> marked(g.size(), 0);
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.defined(k) && std::abs(d.dz[k]) < eps) marked[k] = 1;

  // Zeros between nodes: f_z winds around the cell's corners.
  for (int j = 0; j + 1 < g.ny(); ++j) {
    for (int i = 0; i + 1 < g.nx(); ++i) {
      const std::size_t c[4] = {g.index(i, j), g.index(i + 1, j), g.index(i + 1, j + 1), g.index(i, j + 1)};
      bool ok = true;
      for (std::size_t k : c) ok = ok && g.defined(k) && is_finite(d.dz[k]) && std::abs(d.dz[k]) >= eps;
      if (!ok) continue;
      double turn = 0.0;
      for (int e = 0; e < 4; ++e) turn += std::arg(d.dz[c[(e + 1) % 4]] / d.dz[c[e]]);
      if (std::lround(turn / kTwoPi) != 0) {
        for (std::size_t k : c) marked[k] = 1;
      }
    }
  }

  CriticalPointReport report;
  const double containment_tol = eps + 1e-8 * sup_defined(g, d.dz);
  ComplexField dz_field(f.grid_ptr(), d.dz);
  std::vector<char> seen(g.size(), 0);
  for (std::size_t k0 = 0; k0 < g.size(); ++k0) {
    if (!marked[k0] || seen[k0]) continue;
    CriticalPoint cp;
    cplx sum = 0.0;
    std::deque<std::size_t> queue{k0};
    seen[k0] = 1;
    while (!queue.empty()) {
      const std::size_t k = queue.front();
      queue.pop_front();
      sum += g.point(k);
      ++cp.nodes;
      if (std::abs(d.dzbar[k]) > containment_tol) report.containment_violations.push_back(k);
      const int i = g.col(k), j = g.row(k);
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (!g.on_grid(i + di, j + dj)) continue;
          const std::size_t q = g.index(i + di, j + dj);
          if (marked[q] && !seen[q]) {
            seen[q] = 1;
            queue.push_back(q);
          }
        }
      }
    }
    cp.location = sum / double(cp.nodes);
    try {
      cp.order = winding_number(dz_field, cp.location, 5.0 * g.h());
    } catch (const Error&) {
      cp.order.reset();
    }
    report.points.push_back(cp);
  }
  std::sort(report.containment_violations.begin(), report.containment_violations.end());
  return report;
}

IdentityResult identity_residual(const ComplexField& f, const MetricDensity& m, const IdentityOptions& options) {
  f.require_defined("identity_residual");
  const Grid& g = f.grid();
  const Derivatives d = derivatives(f);
  const double eps = options.eps_crit_rel * sup_defined(g, d.dz);
  const ComplexField mu = mu_from(f, d, eps);

  std::vector<double> log_mu(g.size(), kNaN), lap(g.size(), kNaN);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (mu.defined_at(k) && std::abs(mu[k]) > 0.0) log_mu[k] = std::log(std::abs(mu[k]));
  }
  kernels::parallel::laplacian(g, std::span<const double>(log_mu), std::span<double>(lap));

  const CriticalPointReport crit = critical_points(f, options.eps_crit_rel);
  const double exclusion = options.critical_exclusion * g.h();

  IdentityResult out{RealField(f.grid_ptr()), 0.0, 0};
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!options.region.contains(g, k)) continue;
    if (!std::isfinite(lap[k]) || !(std::abs(mu[k]) >= options.mu_floor)) continue;
    const cplx z = g.point(k);
    bool near_critical = false;
    for (const CriticalPoint& cp : crit.points) near_critical = near_critical || std::abs(z - cp.location) < exclusion;
    if (near_critical) continue;
    const double jac = std::norm(d.dz[k]) - std::norm(d.dzbar[k]);
    // K(f) rho(f)^2 = -Delta log rho at f.
    const double curvature_term = -m.lap_log(f[k]) * jac;
    out.residual[k] = std::abs(lap[k] - curvature_term);
    out.sup = std::max(out.sup, out.residual[k]);
    ++out.support;
  }
  if (out.support < options.min_support) {
    throw InsufficientSupport(std::to_string(out.support) + " qualifying nodes, need " +
                              std::to_string(options.min_support));
  }
  return out;
}

ExtremumDiagnostic extremum_localization(const RealField& field, double core_radius, cplx center, std::string name) {
  if (!(core_radius > 0.0)) throw InvalidInput("core radius must be positive");
  const Grid& g = field.grid();
  ExtremumDiagnostic out;
  out.field = std::move(name);
  out.core_radius = core_radius;
  out.max = -std::numeric_limits<double>::infinity();
  out.min = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.defined(k)) continue;
    const cplx z = g.point(k);
    if (std::abs(z - center) > core_radius + 1e-12) continue;
    if (!std::isfinite(field[k])) throw InvalidField(out.field + ": undefined value inside the core disk");
    any = true;
    if (field[k] > out.max) {
      out.max = field[k];
      out.argmax = z;
    }
    if (field[k] < out.min) {
      out.min = field[k];
      out.argmin = z;
    }
  }
  if (!any) throw InvalidInput("core disk contains no grid nodes");
  const double rim = 2.0 * g.h();
  out.max_on_rim = core_radius - std::abs(out.argmax - center) <= rim;
  out.min_on_rim = core_radius - std::abs(out.argmin - center) <= rim;
  out.degenerate = out.max - out.min < 1e-14;
  return out;
}

std::map<std::string, std::string> conventions() {
  return {
      {"wirtinger", "f_z = (f_x - i f_y)/2, f_zbar = (f_x + i f_y)/2"},
      {"beltrami", "mu = f_zbar / f_z, undefined where |f_z| < eps_crit"},
      {"jacobian", "J = |f_z|^2 - |f_zbar|^2"},
      {"distortion", "K = (1 + |mu|^2) / (1 - |mu|^2) (squared convention, not (1+|mu|)/(1-|mu|))"},
      {"hopf", "Phi = rho(f)^2 f_z conj(f_zbar); residual sup|dPhi/dzbar| / sup|Phi| on the core, 0 when sup|Phi| <= 1e-10 sup rho(f)^2 (|f_z|^2 + |f_zbar|^2)"},
      {"energy", "integral of |grad f|^2 rho(f)^2 with |grad f|^2 = 2(|f_z|^2 + |f_zbar|^2)"},
      {"tension_residual", "sup over interior nodes at depth >= 2 of |Delta f / 4 + dlog rho(f) f_z f_zbar|"},
      {"identity", "|Delta log|mu| - K(f) rho(f)^2 J| at nodes with |mu| >= mu_floor, 3h from critical points"},
      {"core", "residual diagnostics over interior nodes at depth >= 2 inside |z| <= core_radius"},
      {"tension_equation", "f_zzbar + dlog rho(f) f_z f_zbar = 0 (coefficient dlog rho, not 2 dlog rho)"},
      {"extremum_principle", "tested on |mu_f|; equals |mu_g| of the Stoilow factor away from critical points"},
  };
}

AnalysisReport analyze(const ComplexField& f, const MetricDensity& m, const AnalysisOptions& options) {
  f.require_defined("analyze");
  const Grid& g = f.grid();
  const Derivatives d = derivatives(f);
  const double eps = options.eps_crit_rel * sup_defined(g, d.dz);

  AnalysisReport r(f.grid_ptr());
  r.mu = mu_from(f, d, eps);
  r.hopf = hopf(f, m);
  r.eps_crit = eps;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.defined(k)) r.jacobian[k] = std::norm(d.dz[k]) - std::norm(d.dzbar[k]);
  r.distortion = distortion_of_mu(r.mu, &r.saturated_nodes);
  Region core;
  core.radius = options.core_radius;
  r.hopf_residual = holomorphy_residual(r.hopf, core, differential_zero_level(f, m, core, 2));
  r.hopf_tension_residual =
      holomorphy_residual(hopf_for_tension(f, m), core, differential_zero_level(f, m, core, 1));

  IdentityOptions io;
  io.region = core;
  io.mu_floor = options.mu_floor;
  io.eps_crit_rel = options.eps_crit_rel;
  try {
    IdentityResult id = identity_residual(f, m, io);
    r.identity_field = std::move(id.residual);
    r.identity_residual = id.sup;
    r.identity_support = id.support;
  } catch (const InsufficientSupport&) {
    r.identity_residual.reset();
  }

  r.min_jacobian_core = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.defined(k) || std::abs(g.point(k)) > options.core_radius + 1e-12) continue;
    r.min_jacobian_core = std::min(r.min_jacobian_core, r.jacobian[k]);
    if (r.mu.defined_at(k)) r.sup_mu_core = std::max(r.sup_mu_core, std::abs(r.mu[k]));
  }
  const double k2 = r.sup_mu_core * r.sup_mu_core;
  r.max_distortion_core = k2 < 1.0 ? (1.0 + k2) / (1.0 - k2) : std::numeric_limits<double>::infinity();

  r.critical = critical_points(f, options.eps_crit_rel);

  RealField abs_mu = modulus(r.mu);
  for (double radius : options.extremum_radii) {
    r.extrema.push_back(extremum_localization(abs_mu, radius, 0.0, "abs_mu"));
  }
  for (double radius : options.winding_radii) {
    std::optional<int> w;
    try {
      w = winding_number(f, 0.0, radius);
    } catch (const Error&) {
      w.reset();
    }
    r.windings.emplace_back(radius, w);
  }
  r.conventions = conventions();
  return r;
}

}  // namespace hmlab
