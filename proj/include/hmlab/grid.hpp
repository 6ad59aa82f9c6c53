#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace hmlab {

using cplx = std::complex<double>;

enum class DomainKind { unit_disk, rectangle };
enum class NodeKind : std::uint8_t { exterior, interior, boundary };

/// Axis directions, in the order used by all stencil tables.
enum class Dir : std::uint8_t { east = 0, west = 1, north = 2, south = 3 };

inline constexpr std::array<Dir, 4> kDirs{Dir::east, Dir::west, Dir::north, Dir::south};
inline constexpr std::array<int, 4> kDi{1, -1, 0, 0};
inline constexpr std::array<int, 4> kDj{0, 0, 1, -1};

inline constexpr Dir opposite(Dir d) {
  switch (d) {
    case Dir::east: return Dir::west;
    case Dir::west: return Dir::east;
    case Dir::north: return Dir::south;
    case Dir::south: return Dir::north;
  }
  return d;
}

/// Where a grid line leaving an interior node meets the domain boundary.
///
/// `arm` is the distance from `node` to `point` in units of h, in (0, 1].
/// `outer` is the non-interior neighbour of `node` in direction `dir`.
struct Crossing {
  std::size_t node;
  Dir dir;
  double arm;
  cplx point;
  std::size_t outer;
};

inline constexpr std::size_t kNoCrossing = static_cast<std::size_t>(-1);

/// Uniform masked grid over a planar domain.
///
/// Node (i, j) sits at origin + h * (i + i j). For the unit disk a node is
/// interior iff |z| < 1 (less a 1e-12 guard); boundary nodes are the non-interior 4-neighbours of
/// interior nodes; everything else is exterior. For a rectangle the outer ring
/// of nodes is the boundary.
class Grid {
 public:
  static std::shared_ptr<const Grid> unit_disk(int n);
  static std::shared_ptr<const Grid> rectangle(int nx, int ny, cplx origin, double h);

  DomainKind domain() const noexcept { return domain_; }
  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  std::size_t size() const noexcept { return kind_.size(); }
  double h() const noexcept { return h_; }
  cplx origin() const noexcept { return origin_; }

  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
  }
  int col(std::size_t k) const noexcept { return static_cast<int>(k % static_cast<std::size_t>(nx_)); }
  int row(std::size_t k) const noexcept { return static_cast<int>(k / static_cast<std::size_t>(nx_)); }
  bool on_grid(int i, int j) const noexcept { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }

  cplx point(int i, int j) const noexcept { return origin_ + cplx(h_ * i, h_ * j); }
  cplx point(std::size_t k) const noexcept { return point(col(k), row(k)); }

  NodeKind kind(std::size_t k) const noexcept { return kind_[k]; }
  bool interior(std::size_t k) const noexcept { return kind_[k] == NodeKind::interior; }
  bool defined(std::size_t k) const noexcept { return kind_[k] != NodeKind::exterior; }
  /// True if (i, j) is on the grid and not exterior.
  bool defined(int i, int j) const noexcept { return on_grid(i, j) && defined(index(i, j)); }
  bool interior(int i, int j) const noexcept { return on_grid(i, j) && interior(index(i, j)); }

  /// Steps (4-connected) from an interior node to the nearest non-interior
  /// node; 0 for boundary and exterior nodes.
  int depth(std::size_t k) const noexcept { return depth_[k]; }

  const std::vector<std::size_t>& interior_nodes() const noexcept { return interior_nodes_; }
  const std::vector<std::size_t>& boundary_nodes() const noexcept { return boundary_nodes_; }
  /// Position of node k in interior_nodes(), or -1.
  std::ptrdiff_t interior_slot(std::size_t k) const noexcept { return slot_[k]; }

  const std::vector<Crossing>& crossings() const noexcept { return crossings_; }
  /// Crossing index used to extrapolate each boundary node (aligned with
  /// boundary_nodes()); kNoCrossing for rectangle corners.
  const std::vector<std::size_t>& fill_sources() const noexcept { return fill_source_; }

  /// Area of node k's h-by-h dual cell that lies inside the domain, divided by h^2.
  double cell_fraction(std::size_t k) const noexcept { return cell_fraction_[k]; }

  /// Distance from z to the domain boundary (positive inside).
  double distance_to_boundary(cplx z) const noexcept;

  /// Grids are conformable iff they were built from identical parameters.
  bool same_as(const Grid& other) const noexcept;

 private:
  Grid() = default;
  void finish();

  DomainKind domain_ = DomainKind::unit_disk;
  int nx_ = 0;
  int ny_ = 0;
  double h_ = 0.0;
  cplx origin_{};
  std::vector<NodeKind> kind_;
  std::vector<int> depth_;
  std::vector<std::ptrdiff_t> slot_;
  std::vector<std::size_t> interior_nodes_;
  std::vector<std::size_t> boundary_nodes_;
  std::vector<Crossing> crossings_;
  std::vector<std::size_t> fill_source_;
  std::vector<double> cell_fraction_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Exact area of [x0,x1] x [y0,y1] intersected with the disk |z - c| <= r.
double rectangle_disk_overlap(double x0, double x1, double y0, double y1, cplx c, double r);

}  // namespace hmlab
