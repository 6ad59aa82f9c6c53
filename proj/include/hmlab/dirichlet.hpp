#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hmlab/field.hpp"
#include "hmlab/kernels.hpp"

namespace hmlab {

struct LinearSolveOptions {
  double tol = 1e-10;
  std::size_t max_sweeps = 50000;
};

struct LinearSolveStats {
  std::size_t sweeps = 0;
  double residual = 0.0;
};

/// How Dirichlet data enters the interior stencils.
///
/// `node`: boundary nodes carry the data and every arm has length h.
/// `curve`: data sits where grid lines cross the boundary curve
/// (Shortley-Weller arms), which keeps second order on the disk.
enum class Closure { node, curve };

/// Red-black SOR solver for Delta w = rhs with Dirichlet data, reusable
/// across the many solves of one outer iteration.
class DirichletSolver {
 public:
  DirichletSolver(GridPtr grid, Closure closure, LinearSolveOptions options = {});

  const Grid& grid() const noexcept { return *grid_; }
  Closure closure() const noexcept { return closure_; }
  const kernels::StencilTable& table() const noexcept { return table_; }

  /// Solves for interior-slot values x (warm start in, solution out).
  /// rhs is per interior slot; data is per crossing. Convergence means
  /// the row-scaled residual is at most tol * (|rhs|_inf + |data|_inf).
  /// A positive `loose_target` relaxes the absolute stopping threshold,
  /// for inexact inner solves.
  LinearSolveStats solve(std::span<const cplx> rhs, std::span<const cplx> data, std::span<cplx> x,
                         double loose_target = 0.0) const;

  /// Row-scaled sup of rhs - (A x + boundary contributions): the discrete
  /// Poisson residual in Laplacian units.
  double residual(std::span<const cplx> rhs, std::span<const cplx> data, std::span<const cplx> x) const;

  /// Dirichlet data per crossing from a boundary function: values at the
  /// crossing points (curve) or at the outer nodes (node).
  template <typename Fn>
  std::vector<cplx> crossing_data(Fn&& g) const {
    std::vector<cplx> out;
    out.reserve(grid_->crossings().size());
    for (const Crossing& c : grid_->crossings()) out.push_back(g(closure_ == Closure::curve ? c.point : grid_->point(c.outer)));
    return out;
  }

  /// Writes interior values into a field and fills boundary nodes: by
  /// extrapolation through the curve data (curve) or from `boundary` (node).
  ComplexField assemble(std::span<const cplx> x, std::span<const cplx> data, const ComplexField* boundary = nullptr) const;

 private:
  GridPtr grid_;
  Closure closure_;
  LinearSolveOptions options_;
  kernels::StencilTable table_;
  double omega_;
};

/// Fills boundary nodes of f from its interior values and the data at the
/// boundary crossings, extrapolating quadratically along the crossing line.
void extrapolate_boundary(ComplexField& f, std::span<const cplx> data);

}  // namespace hmlab
