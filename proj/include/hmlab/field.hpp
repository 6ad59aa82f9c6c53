#pragma once

#include <cmath>
#include <complex>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hmlab/error.hpp"
#include "hmlab/grid.hpp"

namespace hmlab {

template <typename T>
inline T undefined_value() {
  if constexpr (std::is_same_v<T, double>) {
    return std::numeric_limits<double>::quiet_NaN();
  } else {
    return T(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
  }
}

inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

/// Values sampled on a Grid. Exterior nodes hold NaN; so do nodes an
/// operation chose to leave undefined (e.g. a quotient at a critical point).
template <typename T>
class Field {
 public:
  using value_type = T;

  explicit Field(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size(), undefined_value<T>()) {}
  Field(GridPtr grid, std::vector<T> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->size()) throw InvalidField("value count does not match grid");
  }

  /// Samples fn(z) on interior and boundary nodes.
  template <typename Fn>
  static Field sample(GridPtr grid, Fn&& fn) {
    Field out(grid);
    for (std::size_t k = 0; k < grid->size(); ++k)
      if (grid->defined(k)) out.values_[k] = static_cast<T>(fn(grid->point(k)));
    return out;
  }

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const T> values() const noexcept { return values_; }
  std::span<T> values() noexcept { return values_; }

  T operator[](std::size_t k) const noexcept { return values_[k]; }
  T& operator[](std::size_t k) noexcept { return values_[k]; }

  /// Checked access; exterior or non-finite values raise InvalidField.
  T at(std::size_t k) const {
    if (k >= values_.size() || !grid_->defined(k)) throw InvalidField("read of exterior node " + std::to_string(k));
    if (!is_finite(values_[k])) throw InvalidField("read of undefined value at node " + std::to_string(k));
    return values_[k];
  }

  bool defined_at(std::size_t k) const noexcept { return grid_->defined(k) && is_finite(values_[k]); }

  bool conformable(const Field<T>& other) const noexcept { return grid_->same_as(other.grid()); }

  /// Throws unless every interior and boundary value is finite.
  void require_defined(const char* what) const {
    for (std::size_t k = 0; k < values_.size(); ++k) {
      if (grid_->defined(k) && !is_finite(values_[k])) {
        throw InvalidField(std::string(what) + ": undefined value at node " + std::to_string(k));
      }
    }
  }

  /// Throws unless every interior value is finite.
  void require_interior(const char* what) const {
    for (std::size_t k : grid_->interior_nodes()) {
      if (!is_finite(values_[k])) {
        throw InvalidField(std::string(what) + ": undefined value at interior node " + std::to_string(k));
      }
    }
  }

 private:
  GridPtr grid_;
  std::vector<T> values_;
};

using ComplexField = Field<cplx>;
using RealField = Field<double>;

template <typename T>
void require_conformable(const Field<T>& a, const Field<T>& b, const char* what) {
  if (!a.conformable(b)) throw InvalidField(std::string(what) + ": fields live on different grids");
}

template <typename T>
Field<T> operator+(const Field<T>& a, const Field<T>& b) {
  require_conformable(a, b, "add");
  Field<T> out(a.grid_ptr());
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a.grid().defined(k)) out[k] = a[k] + b[k];
  return out;
}

template <typename T>
Field<T> operator-(const Field<T>& a, const Field<T>& b) {
  require_conformable(a, b, "subtract");
  Field<T> out(a.grid_ptr());
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a.grid().defined(k)) out[k] = a[k] - b[k];
  return out;
}

template <typename T, typename S>
Field<T> operator*(S scalar, const Field<T>& a) {
  Field<T> out(a.grid_ptr());
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a.grid().defined(k)) out[k] = static_cast<T>(scalar) * a[k];
  return out;
}

ComplexField conj(const ComplexField& f);
RealField real_part(const ComplexField& f);
RealField modulus(const ComplexField& f);
ComplexField to_complex(const RealField& f);

/// (f_x - i f_y) / 2: centred differences, one-sided second order where a
/// centred stencil would leave the defined nodes.
ComplexField wirtinger_dz(const ComplexField& f);
/// (f_x + i f_y) / 2, same stencils as wirtinger_dz.
ComplexField wirtinger_dzbar(const ComplexField& f);
/// 5-point Laplacian at interior nodes; boundary nodes are left undefined.
ComplexField laplacian(const ComplexField& f);
RealField laplacian(const RealField& f);

struct LinearSolveOptions;
/// Solves Delta w = rhs on interior nodes with w = bc on boundary nodes.
/// Throws LinearSolverFailure if the relative residual stays above tolerance.
ComplexField poisson_solve(const ComplexField& rhs, const ComplexField& bc);
ComplexField poisson_solve(const ComplexField& rhs, const ComplexField& bc, const LinearSolveOptions& options);

/// CSV dump: header `x,y,re,im` (complex) or `x,y,val` (real), row major,
/// exterior nodes omitted, 17 significant digits.
void write_csv(std::ostream& os, const ComplexField& f);
void write_csv(std::ostream& os, const RealField& f);
/// Reads a complex CSV dump onto `grid`. Every defined node must appear once.
ComplexField read_complex_csv(std::istream& is, GridPtr grid);

/// Which nodes a diagnostic looks at: interior nodes at least `min_depth`
/// steps from the boundary and, optionally, inside |z - center| <= radius.
struct Region {
  int min_depth = 2;
  double radius = std::numeric_limits<double>::infinity();
  cplx center{0.0, 0.0};

  bool contains(const Grid& g, std::size_t k) const {
    return g.interior(k) && g.depth(k) >= min_depth && std::abs(g.point(k) - center) <= radius;
  }
};

/// Sup norm of a over the region (0 for an empty region). Undefined values
/// inside the region raise InvalidField.
template <typename T>
double sup_norm(const Field<T>& a, const Region& region) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!region.contains(a.grid(), k)) continue;
    if (!is_finite(a[k])) throw InvalidField("sup norm over undefined value at node " + std::to_string(k));
    m = std::max(m, std::abs(a[k]));
  }
  return m;
}

}  // namespace hmlab
