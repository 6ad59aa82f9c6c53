#include "hmlab/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "hmlab/error.hpp"

namespace hmlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0.0 ? t + kTwoPi : t;
}

cplx domain_centre(const Grid& g) {
  if (g.domain() == DomainKind::unit_disk) return 0.0;
  return g.origin() + 0.5 * g.h() * cplx(g.nx() - 1, g.ny() - 1);
}

// Periodic cubic Hermite interpolation with finite-difference slopes.
struct PeriodicCubic {
  std::vector<double> t;
  std::vector<cplx> v;
  std::vector<cplx> slope;

  PeriodicCubic(std::vector<double> theta, std::vector<cplx> values) {
    const std::size_t n = theta.size();
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    for (double& a : theta) a = wrap(a);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return theta[a] < theta[b]; });
    for (std::size_t k : order) {
      t.push_back(theta[k]);
      v.push_back(values[k]);
    }
    for (std::size_t k = 1; k < n; ++k) {
      if (!(t[k] > t[k - 1])) throw InvalidInput("boundary samples: repeated angle");
    }
    slope.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t p = (k + n - 1) % n, q = (k + 1) % n;
      const double tp = k == 0 ? t[p] - kTwoPi : t[p];
      const double tq = k + 1 == n ? t[q] + kTwoPi : t[q];
      slope[k] = (v[q] - v[p]) / (tq - tp);
    }
  }

  cplx operator()(double a) const {
    const std::size_t n = t.size();
    a = wrap(a);
    // Interval [t[k], t[k+1]) with wraparound.
    std::size_t k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), a) - t.begin());
    k = (k + n - 1) % n;
    const std::size_t q = (k + 1) % n;
    double t0 = t[k], t1 = t[q];
    if (t1 <= t0) t1 += kTwoPi;
    if (a < t0) a += kTwoPi;
    const double dt = t1 - t0;
    const double s = (a - t0) / dt;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * v[k] + h10 * dt * slope[k] + h01 * v[q] + h11 * dt * slope[q];
  }
};

}  // namespace

double boundary_angle(const Grid& grid, cplx z) { return wrap(std::arg(z - domain_centre(grid))); }

BoundaryMap BoundaryMap::identity(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("boundary radius must be positive");
  BoundaryMap b;
  b.type_ = "identity";
  b.radius_ = radius;
  b.eval_ = [radius](cplx z) { return radius * z; };
  return b;
}

BoundaryMap BoundaryMap::twist(double amplitude, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("boundary radius must be positive");
  if (!std::isfinite(amplitude)) throw InvalidInput("twist amplitude must be finite");
  BoundaryMap b;
  b.type_ = "twist";
  b.amplitude_ = amplitude;
  b.radius_ = radius;
  b.eval_ = [amplitude, radius](cplx z) {
    const double t = std::arg(z);
    return radius * std::abs(z) * std::polar(1.0, t + amplitude * std::sin(t));
  };
  return b;
}

BoundaryMap BoundaryMap::samples(std::vector<double> theta, std::vector<cplx> values, int declared_degree) {
  if (theta.size() != values.size()) throw InvalidInput("boundary samples: theta and values differ in length");
  if (theta.size() < 4) throw InvalidInput("boundary samples: need at least 4 samples");
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (!std::isfinite(theta[k]) || !std::isfinite(values[k].real()) || !std::isfinite(values[k].imag())) {
      throw InvalidInput("boundary samples: non-finite entry");
    }
  }
  auto spline = std::make_shared<PeriodicCubic>(std::move(theta), std::move(values));
  BoundaryMap b;
  b.type_ = "samples";
  b.degree_ = declared_degree;
  b.eval_ = [spline](cplx z) { return (*spline)(std::arg(z)); };
  return b;
}

BoundaryMap BoundaryMap::function(std::function<cplx(cplx)> g, int declared_degree, std::string name) {
  BoundaryMap b;
  b.type_ = std::move(name);
  b.degree_ = declared_degree;
  b.eval_ = std::move(g);
  return b;
}

std::vector<cplx> BoundaryMap::samples_on(const Grid& grid) const {
  std::vector<std::pair<double, cplx>> pts;
  pts.reserve(grid.boundary_nodes().size());
  for (std::size_t k : grid.boundary_nodes()) {
    const cplx z = grid.point(k);
    const double a = boundary_angle(grid, z);
    // Disk data lives on the unit circle; rectangle nodes lie on the boundary already.
    pts.emplace_back(a, eval_(grid.domain() == DomainKind::unit_disk ? std::polar(1.0, a) : z));
  }
  std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<cplx> out;
  out.reserve(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    // Nodes on one ray through the centre share a sample.
    if (k > 0 && pts[k].first - pts[k - 1].first <= 1e-14) continue;
    out.push_back(pts[k].second);
  }
  return out;
}

void BoundaryMap::validate(const Grid& grid) const {
  const std::vector<cplx> s = samples_on(grid);
  if (s.empty()) throw InvalidInput("boundary map: grid has no boundary nodes");
  cplx centroid = 0.0;
  for (const cplx& v : s) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InvalidInput("boundary map: non-finite value");
    centroid += v;
  }
  centroid /= static_cast<double>(s.size());
  double turn = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const cplx a = s[k] - centroid, b = s[(k + 1) % s.size()] - centroid;
    if (std::abs(a) == 0.0) throw InvalidInput("boundary map passes through its centroid");
    turn += std::arg(b / a);
  }
  const long winding = std::lround(turn / kTwoPi);
  if (winding != degree_) {
    throw InvalidInput("boundary map winds " + std::to_string(winding) + " times, declared " + std::to_string(degree_));
  }
  if (degree_ == 1) {
    double scale = 0.0;
    for (const cplx& v : s) scale = std::max(scale, std::abs(v - centroid));
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = a + 1; b < s.size(); ++b) {
        if (std::abs(s[a] - s[b]) <= 1e-14 * scale) {
          throw InvalidInput("boundary map is not injective on the boundary samples");
        }
      }
    }
  }
}

}  // namespace hmlab
