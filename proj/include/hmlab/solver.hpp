#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hmlab/boundary.hpp"
#include "hmlab/field.hpp"
#include "hmlab/metric.hpp"

namespace hmlab {

struct SolverConfig {
  double tol_residual = 1e-8;
  int max_outer = 500;
  double damping = 0.7;
  double inner_tol = 1e-10;
  std::size_t max_inner_sweeps = 50000;
  /// Stagnation: relative residual drop below `stagnation_drop` across
  /// `stagnation_window` outer iterations.
  int stagnation_window = 50;
  double stagnation_drop = 1e-3;

  void validate() const;
};

struct HarmonicProblem {
  GridPtr grid;
  MetricDensity metric;
  BoundaryMap boundary;
  SolverConfig config;
};

struct SolveResult {
  ComplexField f;
  std::vector<double> residual_history;
  std::vector<double> energy_history;
  bool converged = false;
  int iterations = 0;
  std::size_t inner_sweeps = 0;
  std::vector<std::string> warnings;
};

/// Harmonic extension of the boundary data into the unit disk, by the
/// Fourier series of the trapezoidal-rule samples of the data on the
/// circle. Boundary nodes are filled by extrapolation through the data.
ComplexField poisson_extension(const BoundaryMap& boundary, GridPtr grid);

/// Lagged-coefficient (Picard) iteration on the tension equation:
///   Delta w = -4 dlog(f) f_z f_zbar,  f <- (1 - lambda) f + lambda w.
/// The first step is taken undamped. Throws RangeViolation if an iterate
/// leaves the metric's valid region, Stagnation if the residual stalls.
SolveResult solve_tension(const HarmonicProblem& p);

/// Sup over interior nodes at depth >= 2 of |Delta f / 4 + dlog(f) f_z f_zbar|.
double tension_residual(const ComplexField& f, const MetricDensity& m);
/// Same quantity as a field; undefined outside depth >= 2.
RealField tension_residual_field(const ComplexField& f, const MetricDensity& m);

/// Integral of 2 (|f_z|^2 + |f_zbar|^2) rho(f)^2 by dual-cell quadrature.
double energy(const ComplexField& f, const MetricDensity& m);

/// Names the gradient-norm convention used by energy().
inline constexpr const char* kEnergyConvention = "|grad f|^2 = 2(|f_z|^2 + |f_zbar|^2)";

}  // namespace hmlab
