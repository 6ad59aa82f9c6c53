#include "doctest.h"
#include "hmlab/boundary.hpp"
#include "support.hpp"

using namespace hmlab;
using testing::kPi;

TEST_CASE("twist and identity maps") {
  const auto id = BoundaryMap::identity(0.8);
  CHECK(std::abs(id(cplx(0.0, 1.0)) - cplx(0.0, 0.8)) < 1e-15);
  const auto tw = BoundaryMap::twist(0.3);
  for (double t : {0.0, 0.5, 2.0, 4.0}) {
    CHECK(std::abs(tw(std::polar(1.0, t)) - std::polar(1.0, t + 0.3 * std::sin(t))) < 1e-14);
  }
  CHECK(tw.declared_degree() == 1);
  CHECK(tw.type() == "twist");
  CHECK(tw.amplitude() == 0.3);
  CHECK_THROWS_AS(BoundaryMap::twist(0.3, -1.0), InvalidInput);
}

TEST_CASE("sampled boundary data interpolates its samples") {
  std::vector<double> theta;
  std::vector<cplx> values;
  for (int k = 0; k < 64; ++k) {
    theta.push_back(2.0 * kPi * k / 64);
    values.push_back(std::polar(1.0, theta.back() + 0.2 * std::sin(theta.back())));
  }
  const auto s = BoundaryMap::samples(theta, values);
  for (int k = 0; k < 64; ++k) CHECK(std::abs(s(std::polar(1.0, theta[k])) - values[k]) < 1e-12);
  // Between samples it tracks the smooth map closely.
  const auto tw = BoundaryMap::twist(0.2);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const cplx z = std::polar(1.0, 0.0123 + 2.0 * kPi * k / 500);
    worst = std::max(worst, std::abs(s(z) - tw(z)));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("sampled data rejects bad input") {
  const std::vector<cplx> four{1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  CHECK_THROWS_AS(BoundaryMap::samples({0.0, 1.0, 1.0, 2.0}, four), InvalidInput);
  CHECK_THROWS_AS(BoundaryMap::samples({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}), InvalidInput);
  CHECK_THROWS_AS(BoundaryMap::samples({0.0, 1.0, 2.0, 3.0}, {1.0, cplx(0, std::nan("")), 1.0, 1.0}), InvalidInput);
}

TEST_CASE("validate checks the winding against the declared degree") {
  auto g = Grid::unit_disk(33);
  CHECK_NOTHROW(BoundaryMap::twist(0.5).validate(*g));
  CHECK_NOTHROW(BoundaryMap::identity().validate(*g));
  const auto square = BoundaryMap::function([](cplx z) { return z * z; }, 1, "square");
  CHECK_THROWS_AS(square.validate(*g), InvalidInput);
  const auto square2 = BoundaryMap::function([](cplx z) { return z * z; }, 2, "square");
  CHECK_NOTHROW(square2.validate(*g));
  const auto constant = BoundaryMap::function([](cplx) { return cplx(0.5); }, 0, "constant");
  CHECK_THROWS_AS(constant.validate(*g), InvalidInput);
}

TEST_CASE("boundary samples come in increasing angle") {
  auto g = Grid::unit_disk(33);
  const auto s = BoundaryMap::identity().samples_on(*g);
  REQUIRE(s.size() > 8);
  double prev = -1.0;
  for (cplx v : s) {
    const double t = std::arg(v) < 0 ? std::arg(v) + 2 * kPi : std::arg(v);
    CHECK(t > prev);
    prev = t;
  }
  CHECK(boundary_angle(*g, cplx(0.0, -2.0)) == doctest::Approx(1.5 * kPi));
}
