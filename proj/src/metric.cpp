#include "hmlab/metric.hpp"

#include <cmath>

#include "hmlab/error.hpp"

namespace hmlab {

using cd = std::complex<double>;

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::hyperbolic: return "hyperbolic";
    case MetricKind::spherical: return "spherical";
    case MetricKind::custom: return "custom";
  }
  return "unknown";
}

MetricDensity MetricDensity::euclidean() { return MetricDensity(); }

MetricDensity MetricDensity::hyperbolic(double margin) {
  if (!(margin > 0.0 && margin < 1.0)) throw InvalidMetric("hyperbolic margin must lie in (0, 1)");
  MetricDensity m;
  m.kind_ = MetricKind::hyperbolic;
  m.margin_ = margin;
  m.valid_radius_ = 1.0 - margin;
  return m;
}

MetricDensity MetricDensity::spherical() {
  MetricDensity m;
  m.kind_ = MetricKind::spherical;
  return m;
}

MetricDensity MetricDensity::custom(const std::string& expression, double fd_step, double valid_radius) {
  if (!(fd_step > 0.0 && fd_step < 0.1)) throw InvalidMetric("fd_step must lie in (0, 0.1)");
  if (!(valid_radius > 0.0)) throw InvalidMetric("valid_radius must be positive");
  MetricDensity m;
  m.kind_ = MetricKind::custom;
  m.fd_step_ = fd_step;
  m.valid_radius_ = valid_radius;
  m.expr_ = std::make_shared<const Expression>(Expression::parse(expression));

  const double probe = std::isfinite(valid_radius) ? valid_radius : 2.0;
  constexpr int kProbe = 41;
  for (int j = 0; j < kProbe; ++j) {
    for (int i = 0; i < kProbe; ++i) {
      const cd w(probe * (2.0 * i / (kProbe - 1) - 1.0), probe * (2.0 * j / (kProbe - 1) - 1.0));
      if (std::abs(w) > probe) continue;
      const cd v = m.expr_->eval(w);
      if (!std::isfinite(v.real()) || !(v.real() > 0.0) || std::abs(v.imag()) > 1e-12 * std::abs(v.real())) {
        throw InvalidMetric("density '" + expression + "' is not positive at w = (" + std::to_string(w.real()) +
                            ", " + std::to_string(w.imag()) + ")");
      }
    }
  }
  return m;
}

const std::string& MetricDensity::expression() const {
  static const std::string empty;
  return expr_ ? expr_->text() : empty;
}

bool MetricDensity::valid(cd w) const noexcept {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return false;
  return std::abs(w) <= valid_radius_;
}

void MetricDensity::require_valid(cd w) const {
  if (!valid(w)) throw DomainError(to_string(kind_) + " metric evaluated outside its valid region", w);
}

double MetricDensity::log_rho_custom(cd w) const {
  const cd v = expr_->eval(w);
  if (!std::isfinite(v.real()) || !(v.real() > 0.0)) {
    throw InvalidMetric("density '" + expr_->text() + "' is not positive at w = (" + std::to_string(w.real()) + ", " +
                        std::to_string(w.imag()) + ")");
  }
  return std::log(v.real());
}

double MetricDensity::rho_unchecked(cd w) const {
  const double r2 = std::norm(w);
  switch (kind_) {
    case MetricKind::euclidean: return 1.0;
    case MetricKind::hyperbolic: return 2.0 / (1.0 - r2);
    case MetricKind::spherical: return 2.0 / (1.0 + r2);
    case MetricKind::custom: return std::exp(log_rho_custom(w));
  }
  return 1.0;
}

cd MetricDensity::dlog_unchecked(cd w) const {
  const double r2 = std::norm(w);
  switch (kind_) {
    case MetricKind::euclidean: return 0.0;
    case MetricKind::hyperbolic: return std::conj(w) / (1.0 - r2);
    case MetricKind::spherical: return -std::conj(w) / (1.0 + r2);
    case MetricKind::custom: {
      // d/dw = (d/dx - i d/dy) / 2, fourth-order central differences.
      const double s = fd_step_ * std::max(1.0, std::abs(w));
      auto d1 = [&](cd dir) {
        return (8.0 * (log_rho_custom(w + s * dir) - log_rho_custom(w - s * dir)) -
                (log_rho_custom(w + 2.0 * s * dir) - log_rho_custom(w - 2.0 * s * dir))) /
               (12.0 * s);
      };
      return 0.5 * cd(d1(cd(1.0, 0.0)), -d1(cd(0.0, 1.0)));
    }
  }
  return 0.0;
}

double MetricDensity::lap_log_unchecked(cd w) const {
  const double r2 = std::norm(w);
  switch (kind_) {
    case MetricKind::euclidean: return 0.0;
    case MetricKind::hyperbolic: return 4.0 / ((1.0 - r2) * (1.0 - r2));
    case MetricKind::spherical: return -4.0 / ((1.0 + r2) * (1.0 + r2));
    case MetricKind::custom: {
      // Wider step than dlog: second differences lose two digits to roundoff.
      const double s = 100.0 * fd_step_ * std::max(1.0, std::abs(w));
      const double c = log_rho_custom(w);
      auto d2 = [&](cd dir) {
        return (-(log_rho_custom(w + 2.0 * s * dir) + log_rho_custom(w - 2.0 * s * dir)) +
                16.0 * (log_rho_custom(w + s * dir) + log_rho_custom(w - s * dir)) - 30.0 * c) /
               (12.0 * s * s);
      };
      return d2(cd(1.0, 0.0)) + d2(cd(0.0, 1.0));
    }
  }
  return 0.0;
}

double MetricDensity::curvature_unchecked(cd w) const {
  switch (kind_) {
    case MetricKind::euclidean: return 0.0;
    case MetricKind::hyperbolic: return -1.0;
    case MetricKind::spherical: return 1.0;
    case MetricKind::custom: {
      const double r = rho_unchecked(w);
      return -lap_log_unchecked(w) / (r * r);
    }
  }
  return 0.0;
}

double MetricDensity::rho(cd w) const {
  require_valid(w);
  return rho_unchecked(w);
}

cd MetricDensity::dlog(cd w) const {
  require_valid(w);
  return dlog_unchecked(w);
}

double MetricDensity::lap_log(cd w) const {
  require_valid(w);
  return lap_log_unchecked(w);
}

double MetricDensity::curvature(cd w) const {
  require_valid(w);
  return curvature_unchecked(w);
}

double curvature(const MetricDensity& m, cd w) { return m.curvature(w); }

cd dlog_w(const MetricDensity& m, cd w) { return m.dlog(w); }

MetricDensity make_custom(const std::string& expression, double fd_step, double valid_radius) {
  return MetricDensity::custom(expression, fd_step, valid_radius);
}

}  // namespace hmlab
