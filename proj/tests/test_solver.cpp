#include "doctest.h"
#include "hmlab/solver.hpp"
#include "support.hpp"

using namespace hmlab;
using testing::kPi;
using testing::sup_error;

namespace {

// Poisson integral of the boundary map by a trapezoid rule much finer than
// the one poisson_extension uses.
cplx poisson_oracle(const BoundaryMap& g, cplx z, int m = 20000) {
  cplx sum = 0.0;
  const double r2 = std::norm(z);
  for (int k = 0; k < m; ++k) {
    const cplx e = std::polar(1.0, 2.0 * kPi * k / m);
    sum += g(e) * (1.0 - r2) / std::norm(e - z);
  }
  return sum / double(m);
}

HarmonicProblem problem(int n, MetricDensity m, BoundaryMap b) {
  return HarmonicProblem{Grid::unit_disk(n), std::move(m), std::move(b), {}};
}

const Region kCore{1, 0.8};

}  // namespace

TEST_CASE("poisson_extension reproduces holomorphic and constant data") {
  auto g = Grid::unit_disk(65);
  const auto f = poisson_extension(BoundaryMap::identity(), g);
  CHECK(testing::sup_error_defined(f, [](cplx z) { return z; }) < 1e-12);
  const auto c = poisson_extension(BoundaryMap::function([](cplx) { return cplx(0.3, -0.2); }, 0), g);
  CHECK(testing::sup_error_defined(c, [](cplx) { return cplx(0.3, -0.2); }) < 1e-13);
}

TEST_CASE("poisson_extension of the twist matches a refined quadrature") {
  const auto tw = BoundaryMap::twist(0.3);
  auto g = Grid::unit_disk(65);
  const auto f = poisson_extension(tw, g);
  double worst = 0.0;
  for (std::size_t k = 0; k < g->size(); k += 7) {
    if (!kCore.contains(*g, k)) continue;
    worst = std::max(worst, std::abs(f[k] - poisson_oracle(tw, g->point(k))));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("poisson_extension needs the disk") {
  CHECK_THROWS_AS(poisson_extension(BoundaryMap::identity(), Grid::rectangle(9, 9, cplx(-1, -1), 0.25)),
                  UnsupportedDomain);
}

TEST_CASE("tension residual examples") {
  auto g = Grid::unit_disk(65);
  const auto euclid = MetricDensity::euclidean();
  CHECK(tension_residual(ComplexField::sample(g, [](cplx z) { return z; }), euclid) < 1e-12);
  CHECK(tension_residual(ComplexField::sample(g, [](cplx z) { return z + 0.3 * std::conj(z); }), euclid) < 1e-12);

  const auto hyp = MetricDensity::hyperbolic();
  CHECK(tension_residual(ComplexField::sample(g, [](cplx z) { return 0.9 * z; }), hyp) < 1e-12);

  // f = a z^2 + 0.1 conj z: f_zzbar = 0, so the residual is |dlog(f) 2az 0.1|.
  // a = 0.85 keeps f inside the hyperbolic disk up to the grid boundary.
  static constexpr double a = 0.85;
  auto f = [](cplx z) { return a * z * z + 0.1 * std::conj(z); };
  const auto field = tension_residual_field(ComplexField::sample(g, f), hyp);
  double worst = 0.0;
  for (std::size_t k = 0; k < g->size(); ++k) {
    if (!Region{2}.contains(*g, k)) continue;
    const cplx z = g->point(k), w = f(z);
    const double exact = std::abs(std::conj(w) / (1.0 - std::norm(w)) * 2.0 * a * z * 0.1);
    worst = std::max(worst, std::abs(field[k] - exact));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("energy examples") {
  auto g = Grid::unit_disk(129);
  const auto euclid = MetricDensity::euclidean();
  const double ez = energy(ComplexField::sample(g, [](cplx z) { return z; }), euclid);
  CHECK(std::abs(ez - 2.0 * kPi) < 1e-3);
  const double ezbar = energy(ComplexField::sample(g, [](cplx z) { return std::conj(z); }), euclid);
  CHECK(ezbar == doctest::Approx(ez).epsilon(1e-14));
  CHECK(energy(ComplexField::sample(g, [](cplx) { return cplx(0.2, 0.1); }), euclid) < 1e-25);
  // Spherical weight 4 / (1 + r^2)^2 for f = z: closed form 2 * 2 pi * 4 * (1/2)(1 - 1/2) = 4 pi.
  const double es = energy(ComplexField::sample(g, [](cplx z) { return z; }), MetricDensity::spherical());
  CHECK(std::abs(es - 4.0 * kPi) < 1e-3);
}

TEST_CASE("euclidean solve is the harmonic extension after one step") {
  for (int n : {33, 65}) {
    const auto p = problem(n, MetricDensity::euclidean(), BoundaryMap::twist(0.3));
    const auto r = solve_tension(p);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    const auto ref = poisson_extension(p.boundary, p.grid);
    const double h = p.grid->h();
    CHECK(sup_norm(r.f - ref, kCore) <= 5.0 * h * h);
  }
}

TEST_CASE("conformal boundary data: identity maps are harmonic for every metric") {
  for (const auto& m : {MetricDensity::euclidean(), MetricDensity::hyperbolic(), MetricDensity::spherical()}) {
    const auto p = problem(33, m, BoundaryMap::identity(0.8));
    const auto r = solve_tension(p);
    CHECK(r.converged);
    CHECK(r.iterations <= 1);
    CHECK(testing::sup_error_defined(r.f, [](cplx z) { return 0.8 * z; }) < 1e-10);
  }
}

TEST_CASE("hyperbolic twist converges and self-refines at second order") {
  std::vector<ComplexField> f;
  for (int n : {33, 65, 129}) {
    const auto r = solve_tension(problem(n, MetricDensity::hyperbolic(), BoundaryMap::twist(0.3, 0.8)));
    CHECK(r.converged);
    CHECK(r.residual_history.back() <= 1e-8);
    CHECK(r.residual_history.size() == std::size_t(r.iterations) + 1);
    CHECK(r.energy_history.size() == r.residual_history.size());
    f.push_back(r.f);
  }
  auto diff = [](const ComplexField& coarse, const ComplexField& fine) {
    double m = 0.0;
    for (std::size_t k = 0; k < coarse.size(); ++k) {
      if (!kCore.contains(coarse.grid(), k)) continue;
      m = std::max(m, std::abs(coarse[k] - fine[fine.grid().index(2 * coarse.grid().col(k), 2 * coarse.grid().row(k))]));
    }
    return m;
  };
  const double d0 = diff(f[0], f[1]), d1 = diff(f[1], f[2]);
  CHECK(d0 / d1 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("the tension residual of a converged solve is small") {
  const auto p = problem(65, MetricDensity::spherical(), BoundaryMap::twist(0.3));
  const auto r = solve_tension(p);
  REQUIRE(r.converged);
  CHECK(tension_residual(r.f, p.metric) <= 1e-8);
}

TEST_CASE("rectangle domain starts from the transfinite interpolant") {
  HarmonicProblem p{Grid::rectangle(17, 17, cplx(-0.5, -0.5), 1.0 / 16), MetricDensity::hyperbolic(),
                    BoundaryMap::function([](cplx z) { return z; }, 1, "identity"), {}};
  const auto r = solve_tension(p);
  CHECK(r.converged);
  CHECK(testing::sup_error_defined(r.f, [](cplx z) { return z; }) < 1e-10);
}

TEST_CASE("solver errors") {
  SUBCASE("boundary data outside the hyperbolic region") {
    CHECK_THROWS_AS(solve_tension(problem(33, MetricDensity::hyperbolic(), BoundaryMap::twist(0.3))),
                    InvalidMetricRange);
  }
  SUBCASE("an iterate leaving the valid region") {
    // Data just inside |w| <= 0.999; extrapolated boundary nodes land outside.
    CHECK_THROWS_AS(solve_tension(problem(33, MetricDensity::hyperbolic(), BoundaryMap::twist(0.3, 0.9985))),
                    RangeViolation);
  }
  SUBCASE("stagnation carries the history") {
    auto p = problem(33, MetricDensity::hyperbolic(), BoundaryMap::twist(0.3, 0.8));
    p.config.stagnation_window = 1;
    p.config.stagnation_drop = 0.9999;
    try {
      solve_tension(p);
      FAIL("expected stagnation");
    } catch (const Stagnation& e) {
      CHECK(e.history.size() >= 2);
    }
  }
  SUBCASE("iteration cap") {
    auto p = problem(33, MetricDensity::hyperbolic(), BoundaryMap::twist(0.3, 0.8));
    p.config.max_outer = 2;
    const auto r = solve_tension(p);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 2);
  }
  SUBCASE("degree mismatch") {
    CHECK_THROWS_AS(solve_tension(problem(33, MetricDensity::euclidean(),
                                          BoundaryMap::function([](cplx z) { return z * z; }, 1))),
                    InvalidInput);
  }
  SUBCASE("bad config") {
    auto p = problem(33, MetricDensity::euclidean(), BoundaryMap::identity());
    p.config.damping = 0.0;
    CHECK_THROWS_AS(solve_tension(p), InvalidInput);
  }
}
