#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hmlab/field.hpp"
#include "hmlab/metric.hpp"

namespace hmlab {

/// Relative threshold below which |f_z| counts as zero: eps_crit is this
/// factor times sup |f_z|.
inline constexpr double kDefaultEpsCritRel = 1e-10;
inline constexpr double kDefaultMuFloor = 0.01;

/// eps_crit for f: kDefaultEpsCritRel (or `rel`) times sup |f_z| over defined nodes.
double eps_crit(const ComplexField& f, double rel = kDefaultEpsCritRel);

/// f_zbar / f_z; undefined where |f_z| < eps_crit.
ComplexField beltrami(const ComplexField& f, double eps_crit_rel = kDefaultEpsCritRel);
/// |f_z|^2 - |f_zbar|^2.
RealField jacobian(const ComplexField& f);
/// (1 + |mu|^2) / (1 - |mu|^2), the squared convention. Nodes with |mu| >= 1
/// get +infinity and are listed in `saturated` when given.
RealField distortion(const ComplexField& f, std::vector<std::size_t>* saturated = nullptr);
RealField distortion_of_mu(const ComplexField& mu, std::vector<std::size_t>* saturated = nullptr);
/// rho(f)^2 f_z conj(f_zbar). DomainError if f leaves the metric's region.
ComplexField hopf(const ComplexField& f, const MetricDensity& m);
/// rho(f) f_z conj(f_zbar): the quadratic differential that is holomorphic
/// for solutions of the tension equation with coefficient dlog rho, as
/// solved here. `hopf` carries rho^2, which matches the coefficient 2 dlog rho
/// of the energy's Euler-Lagrange equation instead.
ComplexField hopf_for_tension(const ComplexField& f, const MetricDensity& m);
/// sup over the region of |d phi / d zbar|, divided by sup |phi| there (plus a tiny guard).
/// Returns 0 when sup |phi| <= zero_level: a differential at rounding level is zero.
double holomorphy_residual(const ComplexField& phi, const Region& region = {}, double zero_level = 0.0);

inline constexpr double kZeroDifferentialRel = 1e-10;
/// kZeroDifferentialRel times the sup over the region of rho(f)^power (|f_z|^2 + |f_zbar|^2),
/// the scale of a Hopf-type differential carrying rho^power.
double differential_zero_level(const ComplexField& f, const MetricDensity& m, const Region& region, int power);

struct CriticalPoint {
  cplx location;
  std::size_t nodes = 0;
  /// Winding of f_z about its value at the location on a circle of radius 5h;
  /// empty when that circle cannot be resolved on the grid.
  std::optional<int> order;
};

struct CriticalPointReport {
  std::vector<CriticalPoint> points;
  /// Nodes of the critical set where f_zbar is not small, i.e. where
  /// {f_z = 0} is not contained in {f_zbar = 0}.
  std::vector<std::size_t> containment_violations;
};

/// Zeros of f_z: nodes with |f_z| < eps_crit, plus the corners of grid cells
/// around which f_z winds, grouped into 8-connected clusters.
CriticalPointReport critical_points(const ComplexField& f, double eps_crit_rel = kDefaultEpsCritRel);

struct IdentityOptions {
  double mu_floor = kDefaultMuFloor;
  double eps_crit_rel = kDefaultEpsCritRel;
  /// Exclusion radius around critical points, in units of h.
  double critical_exclusion = 3.0;
  Region region{};
  std::size_t min_support = 10;
};

struct IdentityResult {
  RealField residual;
  double sup = 0.0;
  std::size_t support = 0;
};

/// |Delta log|mu| - K(f) rho(f)^2 J| at nodes with |mu| >= mu_floor, away
/// from critical points. InsufficientSupport below min_support nodes.
IdentityResult identity_residual(const ComplexField& f, const MetricDensity& m, const IdentityOptions& options = {});

/// Degree of f - f(center) along the circle |z - center| = radius, sampled
/// by bilinear interpolation at no fewer than 64 points.
int winding_number(const ComplexField& f, cplx center, double radius);

/// Value of f at an arbitrary point by bilinear interpolation.
/// Throws InvalidInput if the enclosing cell is not fully defined.
cplx bilinear(const ComplexField& f, cplx z);

struct ExtremumDiagnostic {
  std::string field;
  double core_radius = 0.0;
  bool degenerate = false;
  cplx argmax;
  double max = 0.0;
  bool max_on_rim = false;
  cplx argmin;
  double min = 0.0;
  bool min_on_rim = false;
};

/// Locates max and min over the closed disk |z - center| <= core_radius.
/// A location is on the rim unless it lies more than 2h inside.
ExtremumDiagnostic extremum_localization(const RealField& field, double core_radius, cplx center = 0.0,
                                         std::string name = "field");

/// Residual diagnostics (Hopf, identity) are taken over interior nodes at
/// depth >= 2 inside |z| <= core_radius.
struct AnalysisOptions {
  double core_radius = 0.8;
  double mu_floor = kDefaultMuFloor;
  double eps_crit_rel = kDefaultEpsCritRel;
  std::vector<double> extremum_radii{0.5, 0.7, 0.8};
  std::vector<double> winding_radii{0.3, 0.5, 0.7};
};

struct AnalysisReport {
  explicit AnalysisReport(const GridPtr& g) : mu(g), jacobian(g), distortion(g), hopf(g), identity_field(g) {}

  ComplexField mu;
  RealField jacobian;
  RealField distortion;
  ComplexField hopf;
  RealField identity_field;
  double hopf_residual = 0.0;
  /// Holomorphy residual of hopf_for_tension.
  double hopf_tension_residual = 0.0;
  /// Empty when too few nodes qualify.
  std::optional<double> identity_residual;
  std::size_t identity_support = 0;
  double min_jacobian_core = 0.0;
  double sup_mu_core = 0.0;        // k_U on |z| <= core_radius
  double max_distortion_core = 0.0;
  double eps_crit = 0.0;
  std::vector<std::size_t> saturated_nodes;
  CriticalPointReport critical;
  std::vector<ExtremumDiagnostic> extrema;
  std::vector<std::pair<double, std::optional<int>>> windings;
  std::map<std::string, std::string> conventions;
};

AnalysisReport analyze(const ComplexField& f, const MetricDensity& m, const AnalysisOptions& options = {});

/// Normalisations shared by every report.
std::map<std::string, std::string> conventions();

}  // namespace hmlab
