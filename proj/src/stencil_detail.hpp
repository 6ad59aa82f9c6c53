#pragma once

// Per-node formulas shared by the parallel and serial kernels. The kernels
// differ only in how they traverse nodes and combine results.

#include <cmath>
#include <complex>
#include <limits>

#include "hmlab/grid.hpp"
#include "hmlab/kernels.hpp"

namespace hmlab::kernels::detail {

inline cplx nan_cplx() {
  return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
}

/// Second-order derivative of f along (di, dj) at (i, j): centred where both
/// neighbours are defined, one-sided three-point otherwise, two-point as a
/// last resort. NaN if the node has no defined neighbour on that axis.
template <typename T>
inline T axis_derivative(const Grid& g, const T* f, int i, int j, int di, int dj) {
  const double h = g.h();
  const T f0 = f[g.index(i, j)];
  const bool p1 = g.defined(i + di, j + dj);
  const bool m1 = g.defined(i - di, j - dj);
  if (p1 && m1) return (f[g.index(i + di, j + dj)] - f[g.index(i - di, j - dj)]) / (2.0 * h);
  if (m1 && g.defined(i - 2 * di, j - 2 * dj)) {
    return (3.0 * f0 - 4.0 * f[g.index(i - di, j - dj)] + f[g.index(i - 2 * di, j - 2 * dj)]) / (2.0 * h);
  }
  if (p1 && g.defined(i + 2 * di, j + 2 * dj)) {
    return (-3.0 * f0 + 4.0 * f[g.index(i + di, j + dj)] - f[g.index(i + 2 * di, j + 2 * dj)]) / (2.0 * h);
  }
  if (p1) return (f[g.index(i + di, j + dj)] - f0) / h;
  if (m1) return (f0 - f[g.index(i - di, j - dj)]) / h;
  return T(std::numeric_limits<double>::quiet_NaN());
}

inline void wirtinger_at(const Grid& g, const cplx* f, std::size_t k, cplx& dz, cplx& dzbar) {
  if (!g.defined(k)) {
    dz = dzbar = nan_cplx();
    return;
  }
  const int i = g.col(k), j = g.row(k);
  const cplx fx = axis_derivative(g, f, i, j, 1, 0);
  const cplx fy = axis_derivative(g, f, i, j, 0, 1);
  const cplx ify(-fy.imag(), fy.real());
  dz = 0.5 * (fx - ify);
  dzbar = 0.5 * (fx + ify);
}

template <typename T>
inline T laplacian_at(const Grid& g, const T* f, std::size_t k) {
  if (!g.interior(k)) return T(std::numeric_limits<double>::quiet_NaN());
  const std::size_t nx = static_cast<std::size_t>(g.nx());
  const double inv = 1.0 / (g.h() * g.h());
  return (f[k + 1] + f[k - 1] + f[k + nx] + f[k - nx] - 4.0 * f[k]) * inv;
}

inline cplx apply_offdiag(const StencilTable& t, const cplx* x, std::size_t m) {
  cplx s = 0.0;
  for (std::size_t d = 0; d < 4; ++d) {
    const std::ptrdiff_t q = t.neighbour[m][d];
    if (q >= 0) s += t.coeff[m][d] * x[q];
  }
  return s;
}

inline cplx boundary_term_at(const StencilTable& t, const cplx* values, std::size_t m) {
  cplx s = 0.0;
  for (std::size_t d = 0; d < 4; ++d) {
    const std::ptrdiff_t c = t.crossing[m][d];
    if (c >= 0) s += t.coeff[m][d] * values[c];
  }
  return s;
}

inline cplx harmonic_series_at(const cplx* pos, std::size_t npos, const cplx* neg, std::size_t nneg, cplx z) {
  cplx p = 0.0;
  for (std::size_t n = npos; n-- > 0;) p = p * z + pos[n];
  const cplx w = std::conj(z);
  cplx q = 0.0;
  for (std::size_t n = nneg; n-- > 1;) q = (q + neg[n]) * w;
  return p + q;
}

}  // namespace hmlab::kernels::detail
