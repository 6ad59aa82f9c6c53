#pragma once

#include <optional>

#include "hmlab/field.hpp"

namespace hmlab {

struct HeinzCertificate {
  cplx center;
  double C = 0.0;
  double d = 0.0;
  double alpha = 0.0;
  double u_center = 0.0;
  /// Area integral of u over the disk D(center, alpha).
  double disk_integral = 0.0;
  /// disk_integral / (2 alpha^2), the bound as printed.
  double literal_bound = 0.0;
  bool literal_pass = false;
  /// u_center over the disk mean.
  double empirical_ratio = 0.0;
  /// u_center >= disk mean; only meaningful, and only set, when C = 0.
  std::optional<bool> mean_value_pass;

  double disk_mean() const;
};

/// alpha = min{ sqrt(e / C) / 4, d / 2 }, with the first term infinite at C = 0.
double heinz_alpha(double C, double d);

/// 1.1 times the largest max(0, Delta u / u) over region nodes with u > floor.
/// Negative u (below -1e-12) raises InvalidInput; no node above the floor
/// raises InsufficientSupport.
double estimate_C(const RealField& u, const Region& region = {}, double floor = 1e-6);

/// Certificate for the super-averaging inequality at `center`. The disk
/// integral weights each dual cell by its exact overlap with the disk; cells
/// cut by the rim are subdivided and sampled bilinearly.
/// alpha < 3h raises DiskUnresolved.
HeinzCertificate verify_super_average(const RealField& u, cplx center, double C, double d);

/// False only if the disk mean is positive (> 1e-8) while u(center) is not (<= 1e-12).
bool positivity_conclusion(const RealField& u, const HeinzCertificate& cert);

}  // namespace hmlab
