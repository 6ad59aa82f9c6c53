#include <cmath>
#include <numbers>

#include "hmlab/error.hpp"
#include "hmlab/kernels.hpp"

namespace hmlab::kernels {

StencilTable build_stencil(const Grid& grid, std::span<const double> arms) {
  const auto& crossings = grid.crossings();
  if (arms.size() != crossings.size()) throw InvalidInput("arm count does not match crossings");

  const std::size_t n = grid.interior_nodes().size();
  StencilTable t;
  t.node = grid.interior_nodes();
  t.diag.assign(n, 0.0);
  t.coeff.assign(n, {0.0, 0.0, 0.0, 0.0});
  t.neighbour.assign(n, {-1, -1, -1, -1});
  t.crossing.assign(n, {-1, -1, -1, -1});
  t.row_scale.assign(n, 0.0);

  std::vector<std::array<double, 4>> arm(n, {1.0, 1.0, 1.0, 1.0});
  for (std::size_t c = 0; c < crossings.size(); ++c) {
    const auto m = static_cast<std::size_t>(grid.interior_slot(crossings[c].node));
    const auto d = static_cast<std::size_t>(crossings[c].dir);
    if (!(arms[c] > 0.0 && arms[c] <= 1.0)) throw InvalidInput("arm length outside (0, 1]");
    arm[m][d] = arms[c];
    t.crossing[m][d] = static_cast<std::ptrdiff_t>(c);
  }

  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  for (std::size_t m = 0; m < n; ++m) {
    const std::size_t k = t.node[m];
    const int i = grid.col(k), j = grid.row(k);
    for (std::size_t d = 0; d < 4; ++d) {
      if (t.crossing[m][d] < 0) t.neighbour[m][d] = grid.interior_slot(grid.index(i + kDi[d], j + kDj[d]));
    }
    // Axis pairs (east, west) and (north, south).
    for (std::size_t axis = 0; axis < 2; ++axis) {
      const double ap = arm[m][2 * axis];
      const double am = arm[m][2 * axis + 1];
      t.coeff[m][2 * axis] = 2.0 * inv_h2 / (ap * (ap + am));
      t.coeff[m][2 * axis + 1] = 2.0 * inv_h2 / (am * (ap + am));
      t.diag[m] -= 2.0 * inv_h2 / (ap * am);
    }
    t.row_scale[m] = 4.0 * inv_h2 / std::abs(t.diag[m]);
    t.color[static_cast<std::size_t>((i + j) & 1)].push_back(m);
  }
  return t;
}

double sor_omega(const Grid& grid) {
  // Lowest Dirichlet eigenvalue of the continuous domain.
  double lambda = 0.0;
  if (grid.domain() == DomainKind::unit_disk) {
    lambda = 5.783185962946784;  // first zero of J0, squared
  } else {
    const double lx = grid.h() * (grid.nx() - 1);
    const double ly = grid.h() * (grid.ny() - 1);
    lambda = std::numbers::pi * std::numbers::pi * (1.0 / (lx * lx) + 1.0 / (ly * ly));
  }
  const double rho = std::max(0.0, 1.0 - grid.h() * grid.h() * lambda / 4.0);
  return 2.0 / (1.0 + std::sqrt(1.0 - rho * rho));
}

}  // namespace hmlab::kernels
