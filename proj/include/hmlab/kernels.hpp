#pragma once

// Grid kernels. Every kernel exists twice: `parallel` (OpenMP, row or slot
// parallel, deterministic for any thread count) and `serial`, a plain
// reference kept for tests and benchmarks. The two must agree to rounding
// for pointwise kernels and to solver tolerance for relaxation.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "hmlab/grid.hpp"
#include "hmlab/metric.hpp"

namespace hmlab::kernels {

/// Interior rows of the Dirichlet Laplacian, indexed by interior slot.
///
/// Along each axis the second difference uses arms a+ and a- (in units of h):
///   u'' ~ 2/(h^2) [u+ / (a+(a+ + a-)) + u- / (a-(a+ + a-)) - u0 / (a+ a-)]
/// An arm of 1 reaches a neighbouring node; a shorter arm ends on the
/// boundary curve where a Dirichlet value is prescribed.
struct StencilTable {
  std::vector<std::size_t> node;
  std::vector<double> diag;
  std::vector<std::array<double, 4>> coeff;
  std::vector<std::array<std::ptrdiff_t, 4>> neighbour;  // interior slot, or -1
  std::vector<std::array<std::ptrdiff_t, 4>> crossing;   // crossing index, or -1
  std::vector<double> row_scale;                         // (4/h^2) / |diag|
  std::array<std::vector<std::size_t>, 2> color;        // slots by (i + j) parity

  std::size_t size() const noexcept { return node.size(); }
};

/// Builds the table; arms[c] is the arm length of grid.crossings()[c].
StencilTable build_stencil(const Grid& grid, std::span<const double> arms);

/// SOR factor 2 / (1 + sqrt(1 - r^2)) with r = 1 - h^2 lambda / 4, lambda the
/// lowest Dirichlet eigenvalue of the continuous domain.
double sor_omega(const Grid& grid);

namespace parallel {

void wirtinger(const Grid& g, std::span<const cplx> f, std::span<cplx> dz, std::span<cplx> dzbar);
void laplacian(const Grid& g, std::span<const double> f, std::span<double> out);
void laplacian(const Grid& g, std::span<const cplx> f, std::span<cplx> out);
/// b[m] = sum over Dirichlet arms of coeff * value.
void boundary_term(const StencilTable& t, std::span<const cplx> crossing_values, std::span<cplx> b);
/// One red-black half sweep over slots of the given colour.
void sor_sweep(const StencilTable& t, int color, std::span<cplx> x, std::span<const cplx> rhs, double omega);
/// max_m row_scale[m] * |rhs[m] - (A x)[m]|.
double residual(const StencilTable& t, std::span<const cplx> x, std::span<const cplx> rhs);
/// r = rhs - A x; returns the row-scaled sup of r.
double defect(const StencilTable& t, std::span<const cplx> x, std::span<const cplx> rhs, std::span<cplx> r);
/// out[m] = -4 dlog(f) f_z f_zbar at t.node[m].
void tension_rhs(const StencilTable& t, const MetricDensity& m, std::span<const cplx> f, std::span<const cplx> dz,
                 std::span<const cplx> dzbar, std::span<cplx> out);
/// out[k] = sum_{n>=0} pos[n] z^n + sum_{n>=1} neg[n] conj(z)^n at points[k].
void harmonic_series(std::span<const cplx> pos, std::span<const cplx> neg, std::span<const cplx> points,
                     std::span<cplx> out);
/// h^2 * sum_k cell_fraction(k) * v[k] over defined nodes.
double integrate(const Grid& g, std::span<const double> v);

}  // namespace parallel

namespace serial {

void wirtinger(const Grid& g, std::span<const cplx> f, std::span<cplx> dz, std::span<cplx> dzbar);
void laplacian(const Grid& g, std::span<const double> f, std::span<double> out);
void laplacian(const Grid& g, std::span<const cplx> f, std::span<cplx> out);
void boundary_term(const StencilTable& t, std::span<const cplx> crossing_values, std::span<cplx> b);
/// Classic lexicographic SOR sweep over all slots.
void sor_sweep(const StencilTable& t, std::span<cplx> x, std::span<const cplx> rhs, double omega);
double residual(const StencilTable& t, std::span<const cplx> x, std::span<const cplx> rhs);
double defect(const StencilTable& t, std::span<const cplx> x, std::span<const cplx> rhs, std::span<cplx> r);
void tension_rhs(const StencilTable& t, const MetricDensity& m, std::span<const cplx> f, std::span<const cplx> dz,
                 std::span<const cplx> dzbar, std::span<cplx> out);
void harmonic_series(std::span<const cplx> pos, std::span<const cplx> neg, std::span<const cplx> points,
                     std::span<cplx> out);
double integrate(const Grid& g, std::span<const double> v);

}  // namespace serial

}  // namespace hmlab::kernels
