#include <sstream>

#include "doctest.h"
#include "hmlab/dirichlet.hpp"
#include "hmlab/field.hpp"
#include "support.hpp"

using namespace hmlab;
using testing::sup_error;
using testing::sup_error_defined;

namespace {

ComplexField sample(const GridPtr& g, cplx (*fn)(cplx)) { return ComplexField::sample(g, fn); }

}  // namespace

TEST_CASE("wirtinger derivatives are exact on linear fields") {
  auto g = Grid::unit_disk(33);
  const auto z = sample(g, [](cplx w) { return w; });
  const auto zbar = sample(g, [](cplx w) { return std::conj(w); });
  CHECK(sup_error_defined(wirtinger_dz(z), [](cplx) { return cplx(1.0); }) < 1e-12);
  CHECK(sup_error_defined(wirtinger_dzbar(z), [](cplx) { return cplx(0.0); }) < 1e-12);
  CHECK(sup_error_defined(wirtinger_dz(zbar), [](cplx) { return cplx(0.0); }) < 1e-12);
  CHECK(sup_error_defined(wirtinger_dzbar(zbar), [](cplx) { return cplx(1.0); }) < 1e-12);
}

TEST_CASE("wirtinger derivatives converge at second order") {
  double prev_dz = 0.0;
  for (int n : {33, 65, 129}) {
    auto g = Grid::unit_disk(n);
    const auto z2 = sample(g, [](cplx w) { return w * w; });
    const auto zz = sample(g, [](cplx w) { return w * std::conj(w); });
    const auto cube = sample(g, [](cplx w) { return w * w * w; });
    const double e_dz = sup_error_defined(wirtinger_dz(cube), [](cplx w) { return 3.0 * w * w; });
    const double e_dzbar = sup_error_defined(wirtinger_dzbar(zz), [](cplx w) { return w; });
    // Centred differences are exact on quadratics, one-sided ones too.
    CHECK(sup_error_defined(wirtinger_dz(z2), [](cplx w) { return 2.0 * w; }) < 1e-12);
    if (prev_dz > 0.0) {
      CHECK(prev_dz / e_dz == doctest::Approx(4.0).epsilon(0.25));
    }
    CHECK(e_dzbar < 1e-12);
    prev_dz = e_dz;
  }
}

TEST_CASE("laplacian stencil") {
  auto g = Grid::unit_disk(33);
  const auto r2 = RealField::sample(g, [](cplx w) { return std::norm(w); });
  const auto saddle = RealField::sample(g, [](cplx w) { return w.real() * w.real() - w.imag() * w.imag(); });
  const Region all{1};
  CHECK(sup_error(laplacian(r2), [](cplx) { return 4.0; }, all) < 1e-11);
  CHECK(sup_error(laplacian(saddle), [](cplx) { return 0.0; }, all) < 1e-11);
  for (std::size_t k : g->boundary_nodes()) CHECK(std::isnan(laplacian(r2)[k]));

  double prev = 0.0;
  for (int n : {33, 65, 129}) {
    auto gg = Grid::unit_disk(n);
    const auto r4 = RealField::sample(gg, [](cplx w) { return std::norm(w) * std::norm(w); });
    const double e = sup_error(laplacian(r4), [](cplx w) { return 16.0 * std::norm(w); }, all);
    if (prev > 0.0) CHECK(prev / e == doctest::Approx(4.0).epsilon(0.05));
    prev = e;
  }
}

TEST_CASE("derivative operators reject undefined input") {
  auto g = Grid::unit_disk(17);
  ComplexField f(g);
  CHECK_THROWS_AS(wirtinger_dz(f), InvalidField);
  CHECK_THROWS_AS(laplacian(f), InvalidField);
  auto other = Grid::unit_disk(33);
  CHECK_THROWS_AS(ComplexField(g) + ComplexField(other), InvalidField);
}

TEST_CASE("poisson_solve examples") {
  auto g = Grid::unit_disk(65);

  SUBCASE("constant data gives a constant") {
    const auto bc = sample(g, [](cplx) { return cplx(1.0); });
    const auto w = poisson_solve(ComplexField::sample(g, [](cplx) { return cplx(0.0); }), bc);
    CHECK(sup_error_defined(w, [](cplx) { return cplx(1.0); }) < 1e-8);
  }
  SUBCASE("|z|^2 is reproduced to stencil exactness") {
    const auto bc = sample(g, [](cplx w) { return cplx(std::norm(w)); });
    const auto w = poisson_solve(ComplexField::sample(g, [](cplx) { return cplx(4.0); }), bc);
    CHECK(sup_error_defined(w, [](cplx z) { return cplx(std::norm(z)); }) < 1e-8);
  }
}

TEST_CASE("poisson_solve on harmonic and cubic data") {
  for (int n : {33, 65, 129}) {
    auto g = Grid::unit_disk(n);
    const auto bc = sample(g, [](cplx w) { return cplx((w * w).real()); });
    const auto w = poisson_solve(ComplexField::sample(g, [](cplx) { return cplx(0.0); }), bc);
    // Node closure puts the data on boundary nodes, where it is exact for this
    // quadratic; the solution is then exact too.
    const double e = sup_error(w, [](cplx z) { return cplx((z * z).real()); }, Region{1});
    CHECK(e < 1e-8);
  }

  // The stencil is exact on cubics; Re e^z + |z|^4 is not, so the order shows.
  double last = 0.0;
  for (int n : {33, 65, 129}) {
    auto g = Grid::unit_disk(n);
    auto exact = [](cplx z) { return cplx(std::exp(z).real() + std::norm(z) * std::norm(z)); };
    const auto bc = ComplexField::sample(g, exact);
    const auto rhs = ComplexField::sample(g, [](cplx z) { return cplx(16.0 * std::norm(z)); });
    const double e = sup_error(poisson_solve(rhs, bc), exact, Region{1});
    if (last > 0.0) CHECK(last / e == doctest::Approx(4.0).epsilon(0.1));
    last = e;
  }
}

TEST_CASE("curve closure is second order on the disk") {
  auto exact = [](cplx z) { return z * z * z + std::conj(z) * std::conj(z) + std::exp(z); };
  double prev = 0.0, prev_boundary = 0.0;
  for (int n : {33, 65, 129}) {
    auto g = Grid::unit_disk(n);
    DirichletSolver s(g, Closure::curve);
    const auto data = s.crossing_data(exact);
    std::vector<cplx> rhs(g->interior_nodes().size(), 0.0), x(rhs.size(), 0.0);
    const auto stats = s.solve(rhs, data, x);
    CHECK(stats.residual < 1e-9);
    const auto f = s.assemble(x, data);
    const double e = sup_error(f, exact, Region{1});
    const double eb = sup_error_defined(f, exact);
    if (prev > 0.0) {
      CHECK(prev / e == doctest::Approx(4.0).epsilon(0.1));
      // Boundary nodes come from quadratic extrapolation: at least second order.
      CHECK(prev_boundary / eb > 4.0);
    }
    prev = e;
    prev_boundary = eb;
  }
}

TEST_CASE("linear solver failure is reported") {
  auto g = Grid::unit_disk(65);
  DirichletSolver s(g, Closure::curve, {1e-12, 8});
  const auto data = s.crossing_data([](cplx z) { return z * z * z; });
  std::vector<cplx> rhs(g->interior_nodes().size(), 1.0), x(rhs.size(), 0.0);
  CHECK_THROWS_AS(s.solve(rhs, data, x), LinearSolverFailure);
}

TEST_CASE("CSV round trip is exact") {
  auto g = Grid::unit_disk(17);
  const auto f = sample(g, [](cplx w) { return std::exp(w) / 3.0; });
  std::stringstream ss;
  write_csv(ss, f);
  const std::string text = ss.str();
  CHECK(text.rfind("x,y,re,im\n", 0) == 0);
  const auto back = read_complex_csv(ss, g);
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (g->defined(k)) CHECK(back[k] == f[k]);
  }
  std::stringstream again;
  write_csv(again, back);
  CHECK(again.str() == text);

  std::stringstream real;
  write_csv(real, modulus(f));
  CHECK(real.str().rfind("x,y,val\n", 0) == 0);
}

TEST_CASE("CSV reader rejects malformed dumps") {
  auto g = Grid::unit_disk(17);
  std::stringstream bad_header("a,b,c\n");
  CHECK_THROWS_AS(read_complex_csv(bad_header, g), InvalidInput);
  std::stringstream short_dump("x,y,re,im\n0,0,1,0\n");
  CHECK_THROWS_AS(read_complex_csv(short_dump, g), InvalidInput);
  std::stringstream off_grid("x,y,re,im\n0.01,0,1,0\n");
  CHECK_THROWS_AS(read_complex_csv(off_grid, g), InvalidInput);
}
