#include <algorithm>
#include <vector>

#include "hmlab/kernels.hpp"
#include "stencil_detail.hpp"

namespace hmlab::kernels::parallel {

void wirtinger(const Grid& g, std::span<const cplx> f, std::span<cplx> dz, std::span<cplx> dzbar) {
  const int ny = g.ny();
  const int nx = g.nx();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = g.index(i, j);
      detail::wirtinger_at(g, f.data(), k, dz[k], dzbar[k]);
    }
  }
}

template <typename T>
static void laplacian_impl(const Grid& g, std::span<const T> f, std::span<T> out) {
  const int ny = g.ny();
  const int nx = g.nx();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = g.index(i, j);
      out[k] = detail::laplacian_at(g, f.data(), k);
    }
  }
}

void laplacian(const Grid& g, std::span<const double> f, std::span<double> out) { laplacian_impl(g, f, out); }
void laplacian(const Grid& g, std::span<const cplx> f, std::span<cplx> out) { laplacian_impl(g, f, out); }

void boundary_term(const StencilTable& t, std::span<const cplx> crossing_values, std::span<cplx> b) {
  const auto n = static_cast<std::ptrdiff_t>(t.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < n; ++m) {
    b[m] = detail::boundary_term_at(t, crossing_values.data(), static_cast<std::size_t>(m));
  }
}

void sor_sweep(const StencilTable& t, int color, std::span<cplx> x, std::span<const cplx> rhs, double omega) {
  const auto& slots = t.color[static_cast<std::size_t>(color)];
  const auto n = static_cast<std::ptrdiff_t>(slots.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    const std::size_t m = slots[static_cast<std::size_t>(s)];
    const cplx target = (rhs[m] - detail::apply_offdiag(t, x.data(), m)) / t.diag[m];
    x[m] += omega * (target - x[m]);
  }
}

double residual(const StencilTable& t, std::span<const cplx> x, std::span<const cplx> rhs) {
  const auto n = static_cast<std::ptrdiff_t>(t.size());
  double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::ptrdiff_t m = 0; m < n; ++m) {
    const auto mm = static_cast<std::size_t>(m);
    const cplx r = rhs[mm] - (t.diag[mm] * x[mm] + detail::apply_offdiag(t, x.data(), mm));
    worst = std::max(worst, t.row_scale[mm] * std::abs(r));
  }
  return worst;
}

double defect(const StencilTable& t, std::span<const cplx> x, std::span<const cplx> rhs, std::span<cplx> r) {
  const auto n = static_cast<std::ptrdiff_t>(t.size());
  double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::ptrdiff_t m = 0; m < n; ++m) {
    const auto mm = static_cast<std::size_t>(m);
    r[mm] = rhs[mm] - (t.diag[mm] * x[mm] + detail::apply_offdiag(t, x.data(), mm));
    worst = std::max(worst, t.row_scale[mm] * std::abs(r[mm]));
  }
  return worst;
}

void tension_rhs(const StencilTable& t, const MetricDensity& metric, std::span<const cplx> f,
                 std::span<const cplx> dz, std::span<const cplx> dzbar, std::span<cplx> out) {
  const auto n = static_cast<std::ptrdiff_t>(t.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t m = 0; m < n; ++m) {
    const std::size_t k = t.node[static_cast<std::size_t>(m)];
    out[m] = -4.0 * metric.dlog_unchecked(f[k]) * dz[k] * dzbar[k];
  }
}

void harmonic_series(std::span<const cplx> pos, std::span<const cplx> neg, std::span<const cplx> points,
                     std::span<cplx> out) {
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    out[k] = detail::harmonic_series_at(pos.data(), pos.size(), neg.data(), neg.size(), points[k]);
  }
}

double integrate(const Grid& g, std::span<const double> v) {
  // Row partials summed in row order keep the result independent of threads.
  const int ny = g.ny();
  const int nx = g.nx();
  std::vector<double> rows(static_cast<std::size_t>(ny), 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    double s = 0.0;
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = g.index(i, j);
      if (g.defined(k)) s += g.cell_fraction(k) * v[k];
    }
    rows[static_cast<std::size_t>(j)] = s;
  }
  double total = 0.0;
  for (double r : rows) total += r;
  return total * g.h() * g.h();
}

}  // namespace hmlab::kernels::parallel
