#include "hmlab/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hmlab/error.hpp"

namespace hmlab {

namespace {

std::vector<double> arms_for(const Grid& g, Closure closure) {
  std::vector<double> arms;
  arms.reserve(g.crossings().size());
  for (const Crossing& c : g.crossings()) arms.push_back(closure == Closure::curve ? c.arm : 1.0);
  return arms;
}

double sup_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (const cplx& a : v) m = std::max(m, std::abs(a));
  return m;
}

// Value at t = 1 of the quadratic through (t0, v0), (t1, v1), (t2, v2).
cplx lagrange_at_one(double t0, cplx v0, double t1, cplx v1, double t2, cplx v2) {
  const double l0 = (1.0 - t1) * (1.0 - t2) / ((t0 - t1) * (t0 - t2));
  const double l1 = (1.0 - t0) * (1.0 - t2) / ((t1 - t0) * (t1 - t2));
  const double l2 = (1.0 - t0) * (1.0 - t1) / ((t2 - t0) * (t2 - t1));
  return l0 * v0 + l1 * v1 + l2 * v2;
}

}  // namespace

DirichletSolver::DirichletSolver(GridPtr grid, Closure closure, LinearSolveOptions options)
    : grid_(std::move(grid)),
      closure_(closure),
      options_(options),
      table_(kernels::build_stencil(*grid_, arms_for(*grid_, closure))),
      omega_(kernels::sor_omega(*grid_)) {
  if (!(options_.tol > 0.0)) throw InvalidInput("linear solver tolerance must be positive");
}

double DirichletSolver::residual(std::span<const cplx> rhs, std::span<const cplx> data, std::span<const cplx> x) const {
  const std::size_t n = table_.size();
  if (rhs.size() != n || x.size() != n || data.size() != grid_->crossings().size()) {
    throw InvalidInput("linear residual: size mismatch");
  }
  std::vector<cplx> b(n);
  kernels::parallel::boundary_term(table_, data, b);
  for (std::size_t m = 0; m < n; ++m) b[m] = rhs[m] - b[m];
  return kernels::parallel::residual(table_, x, b);
}

LinearSolveStats DirichletSolver::solve(std::span<const cplx> rhs, std::span<const cplx> data, std::span<cplx> x,
                                        double loose_target) const {
  const std::size_t n = table_.size();
  if (rhs.size() != n || x.size() != n || data.size() != grid_->crossings().size()) {
    throw InvalidInput("linear solve: size mismatch");
  }
  // Move the Dirichlet contributions to the right-hand side.
  std::vector<cplx> b(n);
  kernels::parallel::boundary_term(table_, data, b);
  double b_norm = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    b[m] = rhs[m] - b[m];
    b_norm = std::max(b_norm, table_.row_scale[m] * std::abs(b[m]));
  }
  const double scale = sup_abs(rhs) + sup_abs(data);
  const double h2 = grid_->h() * grid_->h();
  constexpr std::size_t kCheckEvery = 8;
  constexpr double kInnerDrop = 1e-4;

  // Defect correction: relax A d = r from zero and add d to x. Relaxing on
  // the small correction keeps SOR's rounding floor well below the target;
  // what remains is the rounding in evaluating r itself.
  std::vector<cplx> r(n), d(n), rd(n);
  LinearSolveStats stats;
  double res = kernels::parallel::defect(table_, x, b, r);
  for (;;) {
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (4.0 / h2) * (sup_abs(x) + sup_abs(data));
    const double target = std::max({options_.tol * (scale > 0.0 ? scale : 1.0), floor, loose_target});
    if (res <= target) break;
    if (stats.sweeps >= options_.max_sweeps || !std::isfinite(res)) {
      throw LinearSolverFailure(b_norm > 0.0 ? res / b_norm : res, stats.sweeps);
    }
    std::fill(d.begin(), d.end(), cplx(0.0));
    const double inner_target = std::max(kInnerDrop * res, 0.5 * target);
    double inner = res;
    while (inner > inner_target && stats.sweeps < options_.max_sweeps) {
      for (std::size_t s = 0; s < kCheckEvery; ++s) {
        kernels::parallel::sor_sweep(table_, 0, d, r, omega_);
        kernels::parallel::sor_sweep(table_, 1, d, r, omega_);
      }
      stats.sweeps += kCheckEvery;
      inner = kernels::parallel::residual(table_, d, r);
      if (!std::isfinite(inner)) throw LinearSolverFailure(inner, stats.sweeps);
    }
    for (std::size_t m = 0; m < n; ++m) x[m] += d[m];
    const double prev = res;
    res = kernels::parallel::defect(table_, x, b, r);
    if (res > 0.5 * prev && res > target) {
      throw LinearSolverFailure(b_norm > 0.0 ? res / b_norm : res, stats.sweeps);
    }
  }
  stats.residual = b_norm > 0.0 ? res / b_norm : res;
  return stats;
}

ComplexField DirichletSolver::assemble(std::span<const cplx> x, std::span<const cplx> data,
                                       const ComplexField* boundary) const {
  ComplexField f(grid_);
  const auto& nodes = grid_->interior_nodes();
  for (std::size_t m = 0; m < nodes.size(); ++m) f[nodes[m]] = x[m];
  if (closure_ == Closure::node || grid_->domain() == DomainKind::rectangle) {
    if (boundary != nullptr) {
      for (std::size_t k : grid_->boundary_nodes()) f[k] = (*boundary)[k];
    } else {
      // Arms have length h, so the crossing data already sits on the outer node.
      for (const Crossing& c : grid_->crossings()) f[c.outer] = data[&c - grid_->crossings().data()];
    }
    // Rectangle corners touch no stencil; average their two edge neighbours.
    for (std::size_t b = 0; b < grid_->boundary_nodes().size(); ++b) {
      const std::size_t k = grid_->boundary_nodes()[b];
      if (is_finite(f[k])) continue;
      const int i = grid_->col(k), j = grid_->row(k);
      const int ii = i == 0 ? 1 : i - 1;
      const int jj = j == 0 ? 1 : j - 1;
      f[k] = 0.5 * (f[grid_->index(ii, j)] + f[grid_->index(i, jj)]);
    }
    return f;
  }
  extrapolate_boundary(f, data);
  return f;
}

void extrapolate_boundary(ComplexField& f, std::span<const cplx> data) {
  const Grid& g = f.grid();
  const auto& crossings = g.crossings();
  const auto& sources = g.fill_sources();
  for (std::size_t b = 0; b < g.boundary_nodes().size(); ++b) {
    const std::size_t k = g.boundary_nodes()[b];
    if (sources[b] == kNoCrossing) continue;
    const Crossing& c = crossings[sources[b]];
    const auto d = static_cast<std::size_t>(c.dir);
    const int i = g.col(c.node), j = g.row(c.node);
    const int i1 = i - kDi[d], j1 = j - kDj[d];
    const int i2 = i - 2 * kDi[d], j2 = j - 2 * kDj[d];
    const cplx p0 = f[c.node];
    const cplx gv = data[sources[b]];
    const double s = c.arm;
    if (s >= 0.5 && g.interior(i1, j1)) {
      f[k] = lagrange_at_one(-1.0, f[g.index(i1, j1)], 0.0, p0, s, gv);
    } else if (g.interior(i1, j1) && g.interior(i2, j2)) {
      f[k] = lagrange_at_one(-2.0, f[g.index(i2, j2)], -1.0, f[g.index(i1, j1)], s, gv);
    } else {
      f[k] = p0 + (gv - p0) / s;
    }
  }
}

}  // namespace hmlab
