#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hmlab/grid.hpp"

namespace hmlab {

/// Dirichlet data for a harmonic map: a target point for every point of the
/// domain boundary, parametrised by the angle about the domain centre.
class BoundaryMap {
 public:
  /// z -> radius * z.
  static BoundaryMap identity(double radius = 1.0);
  /// e^{it} -> radius * e^{i(t + amplitude sin t)}; a homeomorphism of the
  /// circle for |amplitude| < 1.
  static BoundaryMap twist(double amplitude, double radius = 1.0);
  /// Periodic cubic interpolation through (theta_j, values_j).
  static BoundaryMap samples(std::vector<double> theta, std::vector<cplx> values, int declared_degree = 1);
  /// Arbitrary boundary function of the boundary point z.
  static BoundaryMap function(std::function<cplx(cplx)> g, int declared_degree, std::string name = "function");

  cplx operator()(cplx z) const { return eval_(z); }
  int declared_degree() const noexcept { return degree_; }
  const std::string& type() const noexcept { return type_; }
  double amplitude() const noexcept { return amplitude_; }
  double radius() const noexcept { return radius_; }

  /// Checks the data as sampled at the grid's boundary-node angles: the
  /// discrete winding about the sample centroid must equal the declared
  /// degree and, for degree 1, consecutive samples must be distinct.
  /// Throws InvalidInput otherwise.
  void validate(const Grid& grid) const;

  /// Samples at the distinct boundary-node angles of `grid`, in increasing angle.
  std::vector<cplx> samples_on(const Grid& grid) const;

 private:
  BoundaryMap() = default;

  std::function<cplx(cplx)> eval_;
  int degree_ = 1;
  std::string type_;
  double amplitude_ = 0.0;
  double radius_ = 1.0;
};

/// Angle of z about the centre of the grid's domain, in [0, 2 pi).
double boundary_angle(const Grid& grid, cplx z);

}  // namespace hmlab
