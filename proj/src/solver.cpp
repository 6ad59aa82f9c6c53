#include "hmlab/solver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hmlab/dirichlet.hpp"
#include "hmlab/kernels.hpp"

namespace hmlab {

namespace {

// Coefficients c_k of the trapezoidal rule on M points, for k in (-M/2, M/2).
void fourier_coefficients(const std::vector<cplx>& s, std::vector<cplx>& pos, std::vector<cplx>& neg) {
  const std::size_t m = s.size();
  std::vector<cplx> twiddle(m);
  for (std::size_t j = 0; j < m; ++j) twiddle[j] = std::polar(1.0, -2.0 * std::numbers::pi * double(j) / double(m));
  const std::size_t half = m / 2;
  pos.assign(half, 0.0);
  neg.assign(half, 0.0);
  const auto count = static_cast<std::ptrdiff_t>(half);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t kk = 0; kk < count; ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    cplx a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t r = (j * k) % m;
      a += s[j] * twiddle[r];
      b += s[j] * std::conj(twiddle[r]);
    }
    pos[k] = a / double(m);
    neg[k] = b / double(m);
  }
  neg[0] = 0.0;
  double peak = 0.0;
  for (std::size_t k = 0; k < half; ++k) peak = std::max({peak, std::abs(pos[k]), std::abs(neg[k])});
  // Drop the tail once it sits below rounding level.
  const double cut = 1e-18 * peak;
  auto trim = [cut](std::vector<cplx>& c) {
    std::size_t keep = c.size();
    while (keep > 1 && std::abs(c[keep - 1]) <= cut) --keep;
    c.resize(keep);
  };
  trim(pos);
  trim(neg);
}

ComplexField transfinite(const BoundaryMap& bm, GridPtr grid) {
  const Grid& g = *grid;
  const int nx = g.nx(), ny = g.ny();
  auto edge = [&](int i, int j) { return bm(g.point(i, j)); };
  ComplexField f(grid);
  const cplx c00 = edge(0, 0), c10 = edge(nx - 1, 0), c01 = edge(0, ny - 1), c11 = edge(nx - 1, ny - 1);
  for (int j = 0; j < ny; ++j) {
    const double v = double(j) / (ny - 1);
    for (int i = 0; i < nx; ++i) {
      const double u = double(i) / (nx - 1);
      f[g.index(i, j)] = (1 - u) * edge(0, j) + u * edge(nx - 1, j) + (1 - v) * edge(i, 0) + v * edge(i, ny - 1) -
                         ((1 - u) * (1 - v) * c00 + u * (1 - v) * c10 + (1 - u) * v * c01 + u * v * c11);
    }
  }
  return f;
}

void require_in_range(const ComplexField& f, const MetricDensity& m) {
  const Grid& g = f.grid();
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.defined(k)) continue;
    if (!is_finite(f[k]) || !m.valid(f[k])) throw RangeViolation("iterate left the metric's valid region", k, f[k]);
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (!(tol_residual > 0.0)) throw InvalidInput("tol_residual must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw InvalidInput("damping must lie in (0, 1]");
  if (max_outer < 1) throw InvalidInput("max_outer must be at least 1");
  if (!(inner_tol > 0.0)) throw InvalidInput("inner_tol must be positive");
  if (max_inner_sweeps < 1) throw InvalidInput("max_inner_sweeps must be at least 1");
  if (stagnation_window < 1) throw InvalidInput("stagnation_window must be at least 1");
  if (!(stagnation_drop > 0.0 && stagnation_drop < 1.0)) throw InvalidInput("stagnation_drop must lie in (0, 1)");
}

ComplexField poisson_extension(const BoundaryMap& boundary, GridPtr grid) {
  if (grid->domain() != DomainKind::unit_disk) throw UnsupportedDomain("poisson_extension needs the unit disk");
  const Grid& g = *grid;
  const std::size_t m = std::max<std::size_t>(4 * g.boundary_nodes().size(), 4096);
  std::vector<cplx> samples(m);
  for (std::size_t j = 0; j < m; ++j) {
    samples[j] = boundary(std::polar(1.0, 2.0 * std::numbers::pi * double(j) / double(m)));
    if (!is_finite(samples[j])) throw InvalidInput("boundary data is not finite");
  }
  std::vector<cplx> pos, neg;
  fourier_coefficients(samples, pos, neg);

  std::vector<cplx> points, values(g.interior_nodes().size());
  points.reserve(values.size());
  for (std::size_t k : g.interior_nodes()) points.push_back(g.point(k));
  kernels::parallel::harmonic_series(pos, neg, points, values);

  ComplexField f(grid);
  for (std::size_t s = 0; s < values.size(); ++s) f[g.interior_nodes()[s]] = values[s];
  std::vector<cplx> data;
  data.reserve(g.crossings().size());
  for (const Crossing& c : g.crossings()) data.push_back(boundary(c.point));
  extrapolate_boundary(f, data);
  return f;
}

RealField tension_residual_field(const ComplexField& f, const MetricDensity& m) {
  f.require_defined("tension_residual");
  const Grid& g = f.grid();
  std::vector<cplx> dz(g.size()), dzbar(g.size()), lap(g.size());
  kernels::parallel::wirtinger(g, f.values(), dz, dzbar);
  kernels::parallel::laplacian(g, f.values(), std::span<cplx>(lap));
  RealField out(f.grid_ptr());
  const Region core;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!core.contains(g, k)) continue;
    out[k] = std::abs(0.25 * lap[k] + m.dlog(f[k]) * dz[k] * dzbar[k]);
  }
  return out;
}

double tension_residual(const ComplexField& f, const MetricDensity& m) {
  const RealField r = tension_residual_field(f, m);
  return sup_norm(r, Region{});
}

double energy(const ComplexField& f, const MetricDensity& m) {
  f.require_defined("energy");
  const Grid& g = f.grid();
  std::vector<cplx> dz(g.size()), dzbar(g.size());
  kernels::parallel::wirtinger(g, f.values(), dz, dzbar);
  std::vector<double> density(g.size(), 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.defined(k)) continue;
    const double rho = m.rho(f[k]);
    density[k] = 2.0 * (std::norm(dz[k]) + std::norm(dzbar[k])) * rho * rho;
  }
  return kernels::parallel::integrate(g, density);
}

SolveResult solve_tension(const HarmonicProblem& p) {
  p.config.validate();
  if (!p.grid) throw InvalidInput("problem has no grid");
  const GridPtr& grid = p.grid;
  const Grid& g = *grid;
  const SolverConfig& cfg = p.config;
  const bool disk = g.domain() == DomainKind::unit_disk;

  p.boundary.validate(g);
  DirichletSolver solver(grid, disk ? Closure::curve : Closure::node, {cfg.inner_tol, cfg.max_inner_sweeps});
  const std::vector<cplx> data = solver.crossing_data([&](cplx z) { return p.boundary(z); });
  for (const cplx& v : data) {
    if (!p.metric.valid(v)) {
      throw InvalidMetricRange(fmt::format("boundary value ({}, {}) lies outside the {} metric's valid region", v.real(),
                                      v.imag(), to_string(p.metric.kind())));
    }
  }

  SolveResult out{disk ? poisson_extension(p.boundary, grid) : transfinite(p.boundary, grid), {}, {}, false, 0, 0, {}};
  if (!disk) {
    for (std::size_t b = 0; b < g.boundary_nodes().size(); ++b) {
      const std::size_t k = g.boundary_nodes()[b];
      out.f[k] = p.boundary(g.point(k));
    }
  }
  require_in_range(out.f, p.metric);

  const std::size_t n = g.interior_nodes().size();
  std::vector<cplx> x(n), w(n), rhs(n), dz(g.size()), dzbar(g.size());
  for (std::size_t s = 0; s < n; ++s) x[s] = out.f[g.interior_nodes()[s]];

  for (int k = 0;; ++k) {
    kernels::parallel::wirtinger(g, out.f.values(), dz, dzbar);
    kernels::parallel::tension_rhs(solver.table(), p.metric, out.f.values(), dz, dzbar, rhs);
    // The Poisson residual in Laplacian units is four times the tension residual.
    const double res = 0.25 * solver.residual(rhs, data, x);
    out.residual_history.push_back(res);
    out.energy_history.push_back(energy(out.f, p.metric));
    if (!std::isfinite(res)) throw Stagnation("residual is not finite", out.residual_history);
    if (k > 5 && out.energy_history[k] > out.energy_history[k - 1] * (1.0 + 1e-12)) {
      out.warnings.push_back(fmt::format("energy increased at iteration {}: {:.17g} -> {:.17g}", k,
                                         out.energy_history[k - 1], out.energy_history[k]));
    }
    if (res <= cfg.tol_residual) {
      out.converged = true;
      break;
    }
    if (k >= cfg.max_outer) break;
    const auto win = static_cast<std::size_t>(cfg.stagnation_window);
    if (out.residual_history.size() > win) {
      const double before = out.residual_history[out.residual_history.size() - 1 - win];
      if (res > (1.0 - cfg.stagnation_drop) * before) {
        throw Stagnation(fmt::format("residual fell from {:.3e} to {:.3e} over {} iterations", before, res, win),
                         out.residual_history);
      }
    }

    std::copy(x.begin(), x.end(), w.begin());
    // Only the first step is solved to full accuracy; later steps need to
    // beat the current outer residual, not the final tolerance.
    const double loose = k == 0 ? 0.0 : 0.05 * 4.0 * res;
    out.inner_sweeps += solver.solve(rhs, data, w, loose).sweeps;
    const double lambda = k == 0 ? 1.0 : cfg.damping;
    for (std::size_t s = 0; s < n; ++s) x[s] = (1.0 - lambda) * x[s] + lambda * w[s];
    out.f = solver.assemble(x, data);
    require_in_range(out.f, p.metric);
    ++out.iterations;
  }
  return out;
}

}  // namespace hmlab
