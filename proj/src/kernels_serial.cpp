#include <algorithm>

#include "hmlab/kernels.hpp"
#include "stencil_detail.hpp"

namespace hmlab::kernels::serial {

void wirtinger(const Grid& g, std::span<const cplx> f, std::span<cplx> dz, std::span<cplx> dzbar) {
  for (std::size_t k = 0; k < g.size(); ++k) detail::wirtinger_at(g, f.data(), k, dz[k], dzbar[k]);
}

void laplacian(const Grid& g, std::span<const double> f, std::span<double> out) {
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = detail::laplacian_at(g, f.data(), k);
}

void laplacian(const Grid& g, std::span<const cplx> f, std::span<cplx> out) {
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = detail::laplacian_at(g, f.data(), k);
}

void boundary_term(const StencilTable& t, std::span<const cplx> crossing_values, std::span<cplx> b) {
  for (std::size_t m = 0; m < t.size(); ++m) b[m] = detail::boundary_term_at(t, crossing_values.data(), m);
}

void sor_sweep(const StencilTable& t, std::span<cplx> x, std::span<const cplx> rhs, double omega) {
  for (std::size_t m = 0; m < t.size(); ++m) {
    const cplx target = (rhs[m] - detail::apply_offdiag(t, x.data(), m)) / t.diag[m];
    x[m] += omega * (target - x[m]);
  }
}

double residual(const StencilTable& t, std::span<const cplx> x, std::span<const cplx> rhs) {
  double worst = 0.0;
  for (std::size_t m = 0; m < t.size(); ++m) {
    const cplx r = rhs[m] - (t.diag[m] * x[m] + detail::apply_offdiag(t, x.data(), m));
    worst = std::max(worst, t.row_scale[m] * std::abs(r));
  }
  return worst;
}

double defect(const StencilTable& t, std::span<const cplx> x, std::span<const cplx> rhs, std::span<cplx> r) {
  double worst = 0.0;
  for (std::size_t m = 0; m < t.size(); ++m) {
    r[m] = rhs[m] - (t.diag[m] * x[m] + detail::apply_offdiag(t, x.data(), m));
    worst = std::max(worst, t.row_scale[m] * std::abs(r[m]));
  }
  return worst;
}

void tension_rhs(const StencilTable& t, const MetricDensity& metric, std::span<const cplx> f,
                 std::span<const cplx> dz, std::span<const cplx> dzbar, std::span<cplx> out) {
  for (std::size_t m = 0; m < t.size(); ++m) {
    const std::size_t k = t.node[m];
    out[m] = -4.0 * metric.dlog_unchecked(f[k]) * dz[k] * dzbar[k];
  }
}

void harmonic_series(std::span<const cplx> pos, std::span<const cplx> neg, std::span<const cplx> points,
                     std::span<cplx> out) {
  for (std::size_t k = 0; k < points.size(); ++k) {
    out[k] = detail::harmonic_series_at(pos.data(), pos.size(), neg.data(), neg.size(), points[k]);
  }
}

double integrate(const Grid& g, std::span<const double> v) {
  double total = 0.0;
  for (int j = 0; j < g.ny(); ++j) {
    double s = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t k = g.index(i, j);
      if (g.defined(k)) s += g.cell_fraction(k) * v[k];
    }
    total += s;
  }
  return total * g.h() * g.h();
}

}  // namespace hmlab::kernels::serial
