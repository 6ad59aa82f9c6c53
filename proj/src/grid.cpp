#include "hmlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "hmlab/error.hpp"

namespace hmlab {

namespace {

// Antiderivative of sqrt(1 - x^2) on [-1, 1].
double half_chord_integral(double x) {
  x = std::clamp(x, -1.0, 1.0);
  return 0.5 * (x * std::sqrt(std::max(0.0, 1.0 - x * x)) + std::asin(x));
}

// Overlap with the unit disk centred at the origin.
double unit_overlap(double a, double b, double c, double d) {
  a = std::max(a, -1.0);
  b = std::min(b, 1.0);
  if (a >= b || c >= d) return 0.0;
  std::vector<double> cuts{a, b};
  for (double y : {c, d}) {
    if (std::abs(y) < 1.0) {
      const double x = std::sqrt(1.0 - y * y);
      cuts.push_back(x);
      cuts.push_back(-x);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double p = std::max(cuts[k], a);
    const double q = std::min(cuts[k + 1], b);
    if (q <= p) continue;
    const double m = 0.5 * (p + q);
    const double s = std::sqrt(std::max(0.0, 1.0 - m * m));
    const bool upper_is_curve = d >= s;
    const bool lower_is_curve = c <= -s;
    const double upper = upper_is_curve ? s : d;
    const double lower = lower_is_curve ? -s : c;
    if (upper <= lower) continue;
    const double curve = half_chord_integral(q) - half_chord_integral(p);
    double piece = 0.0;
    piece += upper_is_curve ? curve : d * (q - p);
    piece -= lower_is_curve ? -curve : c * (q - p);
    area += piece;
  }
  return area;
}

}  // namespace

double rectangle_disk_overlap(double x0, double x1, double y0, double y1, cplx c, double r) {
  if (r <= 0.0) return 0.0;
  const double a = (x0 - c.real()) / r;
  const double b = (x1 - c.real()) / r;
  const double lo = (y0 - c.imag()) / r;
  const double hi = (y1 - c.imag()) / r;
  return unit_overlap(a, b, lo, hi) * r * r;
}

std::shared_ptr<const Grid> Grid::unit_disk(int n) {
  if (n < 9) throw InvalidInput("grid needs at least 9 nodes per side");
  auto g = std::shared_ptr<Grid>(new Grid());
  g->domain_ = DomainKind::unit_disk;
  g->nx_ = g->ny_ = n;
  g->h_ = 2.0 / (n - 1);
  g->origin_ = cplx(-1.0, -1.0);
  g->kind_.assign(static_cast<std::size_t>(g->nx_) * static_cast<std::size_t>(g->ny_), NodeKind::exterior);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (std::abs(g->point(i, j)) < 1.0 - 1e-12) g->kind_[g->index(i, j)] = NodeKind::interior;
  g->finish();
  return g;
}

std::shared_ptr<const Grid> Grid::rectangle(int nx, int ny, cplx origin, double h) {
  if (nx < 9 || ny < 9) throw InvalidInput("grid needs at least 9 nodes per side");
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidInput("grid spacing must be positive");
  auto g = std::shared_ptr<Grid>(new Grid());
  g->domain_ = DomainKind::rectangle;
  g->nx_ = nx;
  g->ny_ = ny;
  g->h_ = h;
  g->origin_ = origin;
  g->kind_.assign(static_cast<std::size_t>(g->nx_) * static_cast<std::size_t>(g->ny_), NodeKind::interior);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1) g->kind_[g->index(i, j)] = NodeKind::boundary;
  g->finish();
  return g;
}

void Grid::finish() {
  const std::size_t total = size();

  // Boundary: non-interior 4-neighbours of interior nodes.
  for (std::size_t k = 0; k < total; ++k) {
    if (!interior(k)) continue;
    const int i = col(k), j = row(k);
    for (std::size_t d = 0; d < 4; ++d) {
      const int ii = i + kDi[d], jj = j + kDj[d];
      if (!on_grid(ii, jj)) throw InvalidInput("interior node on the grid edge");
      const std::size_t q = index(ii, jj);
      if (kind_[q] == NodeKind::exterior) kind_[q] = NodeKind::boundary;
    }
  }

  slot_.assign(total, -1);
  for (std::size_t k = 0; k < total; ++k) {
    if (kind_[k] == NodeKind::interior) {
      slot_[k] = static_cast<std::ptrdiff_t>(interior_nodes_.size());
      interior_nodes_.push_back(k);
    } else if (kind_[k] == NodeKind::boundary) {
      boundary_nodes_.push_back(k);
    }
  }
  if (interior_nodes_.empty()) throw InvalidInput("grid has no interior nodes");

  // Depth by breadth-first search from the boundary.
  depth_.assign(total, 0);
  std::deque<std::size_t> queue;
  std::vector<char> seen(total, 0);
  for (std::size_t k : boundary_nodes_) {
    seen[k] = 1;
    queue.push_back(k);
  }
  while (!queue.empty()) {
    const std::size_t k = queue.front();
    queue.pop_front();
    const int i = col(k), j = row(k);
    for (std::size_t d = 0; d < 4; ++d) {
      const int ii = i + kDi[d], jj = j + kDj[d];
      if (!on_grid(ii, jj)) continue;
      const std::size_t q = index(ii, jj);
      if (seen[q] || !interior(q)) continue;
      seen[q] = 1;
      depth_[q] = depth_[k] + 1;
      queue.push_back(q);
    }
  }

  // Crossings of grid lines with the boundary curve.
  for (std::size_t k : interior_nodes_) {
    const int i = col(k), j = row(k);
    const cplx z = point(k);
    for (std::size_t d = 0; d < 4; ++d) {
      const std::size_t q = index(i + kDi[d], j + kDj[d]);
      if (interior(q)) continue;
      Crossing c{k, kDirs[d], 1.0, point(q), q};
      if (domain_ == DomainKind::unit_disk) {
        const bool horizontal = kDj[d] == 0;
        const double along = horizontal ? z.real() : z.imag();
        const double across = horizontal ? z.imag() : z.real();
        const double reach = std::sqrt(std::max(0.0, 1.0 - across * across));
        const double sign = (kDi[d] + kDj[d]) > 0 ? 1.0 : -1.0;
        const double dist = reach - sign * along;
        c.arm = std::clamp(dist / h_, std::numeric_limits<double>::min(), 1.0);
        const double hit = sign * reach;
        c.point = horizontal ? cplx(hit, across) : cplx(across, hit);
      }
      crossings_.push_back(c);
    }
  }

  // Each boundary node is filled from the crossing with the longest arm that ends on it.
  fill_source_.assign(boundary_nodes_.size(), 0);
  std::vector<std::ptrdiff_t> best(total, -1);
  for (std::size_t c = 0; c < crossings_.size(); ++c) {
    const std::size_t q = crossings_[c].outer;
    if (best[q] < 0 || crossings_[c].arm > crossings_[static_cast<std::size_t>(best[q])].arm) {
      best[q] = static_cast<std::ptrdiff_t>(c);
    }
  }
  for (std::size_t b = 0; b < boundary_nodes_.size(); ++b) {
    const std::ptrdiff_t c = best[boundary_nodes_[b]];
    fill_source_[b] = c < 0 ? kNoCrossing : static_cast<std::size_t>(c);
  }

  cell_fraction_.assign(total, 0.0);
  const double hh = h_ * h_;
  for (std::size_t k = 0; k < total; ++k) {
    if (kind_[k] == NodeKind::exterior) continue;
    const cplx z = point(k);
    if (domain_ == DomainKind::unit_disk) {
      cell_fraction_[k] = rectangle_disk_overlap(z.real() - 0.5 * h_, z.real() + 0.5 * h_, z.imag() - 0.5 * h_,
                                                 z.imag() + 0.5 * h_, cplx(0.0, 0.0), 1.0) /
                          hh;
    } else {
      const int i = col(k), j = row(k);
      const double fx = (i == 0 || i == nx_ - 1) ? 0.5 : 1.0;
      const double fy = (j == 0 || j == ny_ - 1) ? 0.5 : 1.0;
      cell_fraction_[k] = fx * fy;
    }
  }
}

double Grid::distance_to_boundary(cplx z) const noexcept {
  if (domain_ == DomainKind::unit_disk) return 1.0 - std::abs(z);
  const double x1 = origin_.real() + h_ * (nx_ - 1);
  const double y1 = origin_.imag() + h_ * (ny_ - 1);
  return std::min({z.real() - origin_.real(), x1 - z.real(), z.imag() - origin_.imag(), y1 - z.imag()});
}

bool Grid::same_as(const Grid& other) const noexcept {
  return this == &other || (domain_ == other.domain_ && nx_ == other.nx_ && ny_ == other.ny_ && h_ == other.h_ &&
                            origin_ == other.origin_);
}

}  // namespace hmlab
