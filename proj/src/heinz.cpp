#include "hmlab/heinz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hmlab/analysis.hpp"
#include "hmlab/kernels.hpp"

namespace hmlab {

double HeinzCertificate::disk_mean() const { return disk_integral / (std::numbers::pi * alpha * alpha); }

double heinz_alpha(double C, double d) {
  if (!(C >= 0.0) || !std::isfinite(C)) throw InvalidInput("C must be finite and non-negative");
  if (!(d > 0.0) || !std::isfinite(d)) throw InvalidInput("d must be finite and positive");
  const double half = d / 2.0;
  if (C == 0.0) return half;
  return std::min(0.25 * std::sqrt(std::numbers::e / C), half);
}

double estimate_C(const RealField& u, const Region& region, double floor) {
  const Grid& g = u.grid();
  std::vector<double> lap(g.size());
  kernels::parallel::laplacian(g, u.values(), std::span<double>(lap));
  double worst = 0.0;
  std::size_t support = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!region.contains(g, k)) continue;
    if (!std::isfinite(u[k])) throw InvalidField("estimate_C: undefined value in the region");
    if (u[k] < -1e-12) throw InvalidInput("estimate_C: u is negative at node " + std::to_string(k));
    if (u[k] <= floor || !std::isfinite(lap[k])) continue;
    ++support;
    worst = std::max(worst, lap[k] / u[k]);
  }
  if (support == 0) throw InsufficientSupport("estimate_C: no node with u above the floor");
  return 1.1 * worst;
}

HeinzCertificate verify_super_average(const RealField& u, cplx center, double C, double d) {
  const Grid& g = u.grid();
  HeinzCertificate cert;
  cert.center = center;
  cert.C = C;
  cert.d = d;
  cert.alpha = heinz_alpha(C, d);
  const double h = g.h();
  if (cert.alpha < 3.0 * h) {
    throw DiskUnresolved("alpha = " + std::to_string(cert.alpha) + " is below 3h = " + std::to_string(3.0 * h));
  }
  const double a = cert.alpha;
  const ComplexField uc = to_complex(u);

  // Nodes whose dual cell can meet the disk.
  const int i0 = static_cast<int>(std::floor((center.real() - a - g.origin().real()) / h)) - 1;
  const int i1 = static_cast<int>(std::ceil((center.real() + a - g.origin().real()) / h)) + 1;
  const int j0 = static_cast<int>(std::floor((center.imag() - a - g.origin().imag()) / h)) - 1;
  const int j1 = static_cast<int>(std::ceil((center.imag() + a - g.origin().imag()) / h)) + 1;
  constexpr int kSub = 8;
  double integral = 0.0;
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const cplx z = g.origin() + cplx(h * i, h * j);
      const double x0 = z.real() - 0.5 * h, x1 = z.real() + 0.5 * h;
      const double y0 = z.imag() - 0.5 * h, y1 = z.imag() + 0.5 * h;
      const double area = rectangle_disk_overlap(x0, x1, y0, y1, center, a);
      if (area <= 0.0) continue;
      if (!g.on_grid(i, j) || !u.defined_at(g.index(i, j))) {
        throw InvalidInput("verify_super_average: disk reaches outside the defined nodes");
      }
      if (area >= h * h * (1.0 - 1e-14)) {
        integral += u[g.index(i, j)] * area;
        continue;
      }
      // Cut by the rim: exact sub-areas, bilinear values.
      const double s = h / kSub;
      for (int q = 0; q < kSub; ++q) {
        for (int p = 0; p < kSub; ++p) {
          const double sx0 = x0 + p * s, sy0 = y0 + q * s;
          const double sub = rectangle_disk_overlap(sx0, sx0 + s, sy0, sy0 + s, center, a);
          if (sub <= 0.0) continue;
          integral += bilinear(uc, cplx(sx0 + 0.5 * s, sy0 + 0.5 * s)).real() * sub;
        }
      }
    }
  }
  cert.disk_integral = integral;
  cert.u_center = bilinear(uc, center).real();
  cert.literal_bound = integral / (2.0 * a * a);
  cert.literal_pass = cert.u_center >= cert.literal_bound;
  const double mean = cert.disk_mean();
  cert.empirical_ratio = mean != 0.0 ? cert.u_center / mean : std::numeric_limits<double>::infinity();
  if (C == 0.0) cert.mean_value_pass = cert.u_center >= mean - 1e-12 * std::max(1.0, std::abs(mean));
  return cert;
}

bool positivity_conclusion(const RealField& /*u*/, const HeinzCertificate& cert) {
  if (!(cert.disk_mean() > 1e-8)) return true;
  return cert.u_center > 1e-12;
}

}  // namespace hmlab
