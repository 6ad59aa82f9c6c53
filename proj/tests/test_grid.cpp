#include <random>

#include "doctest.h"
#include "hmlab/grid.hpp"
#include "support.hpp"

using namespace hmlab;
using testing::kPi;

TEST_CASE("unit disk masks by |z| < 1") {
  auto g = Grid::unit_disk(33);
  CHECK(g->nx() == 33);
  CHECK(g->h() == doctest::Approx(2.0 / 32));
  for (std::size_t k = 0; k < g->size(); ++k) {
    const double r = std::abs(g->point(k));
    if (g->interior(k)) CHECK(r < 1.0);
    else if (g->kind(k) == NodeKind::boundary) CHECK(r >= 1.0 - 1e-12);
  }
  // Every interior neighbour of a boundary node exists, and vice versa.
  for (std::size_t k : g->boundary_nodes()) {
    bool touches = false;
    for (int d = 0; d < 4; ++d) touches |= g->interior(g->col(k) + kDi[d], g->row(k) + kDj[d]);
    CHECK(touches);
  }
}

TEST_CASE("crossings lie on the circle with arms in (0, 1]") {
  auto g = Grid::unit_disk(65);
  REQUIRE(!g->crossings().empty());
  for (const Crossing& c : g->crossings()) {
    CHECK(c.arm > 0.0);
    CHECK(c.arm <= 1.0);
    CHECK(std::abs(std::abs(c.point) - 1.0) < 1e-12);
    const cplx step(kDi[static_cast<int>(c.dir)], kDj[static_cast<int>(c.dir)]);
    CHECK(std::abs(g->point(c.node) + c.arm * g->h() * step - c.point) < 1e-12);
  }
}

TEST_CASE("cell fractions integrate the disk area") {
  for (int n : {33, 65, 129}) {
    auto g = Grid::unit_disk(n);
    double area = 0.0;
    for (std::size_t k = 0; k < g->size(); ++k) area += g->cell_fraction(k) * g->h() * g->h();
    CHECK(area == doctest::Approx(kPi).epsilon(1e-12));
  }
}

TEST_CASE("depth counts steps to the nearest non-interior node") {
  auto g = Grid::unit_disk(65);
  CHECK(g->depth(g->index(32, 32)) == 32);
  for (std::size_t k : g->boundary_nodes()) CHECK(g->depth(k) == 0);
}

TEST_CASE("rectangle grid has its outer ring as boundary") {
  auto g = Grid::rectangle(9, 13, cplx(-1.0, 0.0), 0.25);
  CHECK(g->boundary_nodes().size() == 2 * 9 + 2 * 11);
  CHECK(g->interior_nodes().size() == 7 * 11);
  CHECK(g->point(8, 12) == cplx(1.0, 3.0));
  CHECK(g->distance_to_boundary(cplx(0.0, 0.5)) == doctest::Approx(0.5));
}

TEST_CASE("grid factories reject bad parameters") {
  CHECK_THROWS_AS(Grid::unit_disk(5), InvalidInput);
  CHECK_THROWS_AS(Grid::rectangle(9, 5, 0.0, 0.1), InvalidInput);
  CHECK_THROWS_AS(Grid::rectangle(9, 9, 0.0, -1.0), InvalidInput);
}

TEST_CASE("rectangle-disk overlap against closed forms") {
  // Square inside the disk.
  CHECK(rectangle_disk_overlap(-0.1, 0.1, -0.1, 0.1, 0.0, 1.0) == doctest::Approx(0.04));
  // Disk inside the square.
  CHECK(rectangle_disk_overlap(-2, 2, -2, 2, 0.0, 1.0) == doctest::Approx(kPi));
  // Quarter disk.
  CHECK(rectangle_disk_overlap(0, 2, 0, 2, 0.0, 1.0) == doctest::Approx(kPi / 4));
  // Half disk, off-centre.
  CHECK(rectangle_disk_overlap(0.5, 3, -3, 3, cplx(0.5, 0.2), 0.7) == doctest::Approx(kPi * 0.49 / 2));
  CHECK(rectangle_disk_overlap(2, 3, 2, 3, 0.0, 1.0) == 0.0);
}

TEST_CASE("rectangle-disk overlap matches Monte Carlo (property, seed 7)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 40; ++trial) {
    double x0 = u(rng), x1 = u(rng), y0 = u(rng), y1 = u(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    const cplx c(0.3 * u(rng), 0.3 * u(rng));
    const double r = 0.5 + 0.3 * std::abs(u(rng));
    const double exact = rectangle_disk_overlap(x0, x1, y0, y1, c, r);
    // Midpoint rule on a fine lattice.
    constexpr int m = 800;
    double hits = 0.0;
    const double dx = (x1 - x0) / m, dy = (y1 - y0) / m;
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        if (std::abs(cplx(x0 + (i + 0.5) * dx, y0 + (j + 0.5) * dy) - c) <= r) hits += 1.0;
    const double approx = hits * dx * dy;
    CHECK(exact >= 0.0);
    CHECK(exact <= (x1 - x0) * (y1 - y0) + 1e-14);
    CHECK(std::abs(exact - approx) < 4.0 * (std::abs(x1 - x0) + std::abs(y1 - y0)) * std::max(dx, dy) + 1e-12);
  }
}
