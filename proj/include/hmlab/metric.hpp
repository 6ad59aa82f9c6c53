#pragma once

#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "hmlab/expression.hpp"

namespace hmlab {

enum class MetricKind { euclidean, hyperbolic, spherical, custom };

std::string to_string(MetricKind kind);

/// A conformal metric rho(w)|dw| on the target domain.
///
/// Builtin kinds carry closed-form derivatives of log rho. Custom densities
/// are parsed expressions whose derivatives are taken by fourth-order central
/// differences. All members are immutable; evaluation is thread safe.
class MetricDensity {
 public:
  static constexpr double kDefaultHyperbolicMargin = 1e-3;
  static constexpr double kDefaultFdStep = 1e-5;

  static MetricDensity euclidean();
  static MetricDensity hyperbolic(double margin = kDefaultHyperbolicMargin);
  static MetricDensity spherical();
  /// Wraps an expression for rho(w). The density is probed on its declared
  /// region |w| <= valid_radius (|w| <= 2 when unbounded) and rejected with
  /// InvalidMetric if any probe is non-positive or non-finite.
  static MetricDensity custom(const std::string& expression, double fd_step = kDefaultFdStep,
                              double valid_radius = std::numeric_limits<double>::infinity());

  MetricKind kind() const noexcept { return kind_; }
  double margin() const noexcept { return margin_; }
  double fd_step() const noexcept { return fd_step_; }
  double valid_radius() const noexcept { return valid_radius_; }
  const std::string& expression() const;

  bool valid(std::complex<double> w) const noexcept;

  // Checked evaluation: DomainError outside the valid region.
  double rho(std::complex<double> w) const;
  std::complex<double> dlog(std::complex<double> w) const;
  double lap_log(std::complex<double> w) const;
  double curvature(std::complex<double> w) const;

  // Unchecked evaluation for inner loops; callers validate the range first.
  double rho_unchecked(std::complex<double> w) const;
  std::complex<double> dlog_unchecked(std::complex<double> w) const;
  double lap_log_unchecked(std::complex<double> w) const;
  double curvature_unchecked(std::complex<double> w) const;

 private:
  MetricDensity() = default;
  void require_valid(std::complex<double> w) const;
  double log_rho_custom(std::complex<double> w) const;

  MetricKind kind_ = MetricKind::euclidean;
  double margin_ = 0.0;
  double fd_step_ = kDefaultFdStep;
  double valid_radius_ = std::numeric_limits<double>::infinity();
  std::shared_ptr<const Expression> expr_;
};

/// K(w) = -(Delta log rho)(w) / rho(w)^2. Exactly 0, -1, +1 for the builtins.
double curvature(const MetricDensity& m, std::complex<double> w);
/// d/dw log rho at w.
std::complex<double> dlog_w(const MetricDensity& m, std::complex<double> w);
MetricDensity make_custom(const std::string& expression, double fd_step = MetricDensity::kDefaultFdStep,
                          double valid_radius = std::numeric_limits<double>::infinity());

}  // namespace hmlab
