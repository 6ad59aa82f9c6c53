#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "hmlab/field.hpp"

namespace testing {

using hmlab::cplx;

inline constexpr double kPi = std::numbers::pi;

/// sup over region nodes of |f - exact(z)|.
template <typename T, typename Fn>
double sup_error(const hmlab::Field<T>& f, Fn&& exact, const hmlab::Region& region = {}) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!region.contains(f.grid(), k)) continue;
    m = std::max(m, std::abs(f[k] - static_cast<T>(exact(f.grid().point(k)))));
  }
  return m;
}

/// sup over all defined nodes, boundary included.
template <typename T, typename Fn>
double sup_error_defined(const hmlab::Field<T>& f, Fn&& exact) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!f.grid().defined(k)) continue;
    m = std::max(m, std::abs(f[k] - static_cast<T>(exact(f.grid().point(k)))));
  }
  return m;
}

}  // namespace testing
