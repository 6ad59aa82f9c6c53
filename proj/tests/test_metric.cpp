#include "doctest.h"
#include "hmlab/expression.hpp"
#include "hmlab/metric.hpp"
#include "support.hpp"

using namespace hmlab;

TEST_CASE("expression grammar") {
  CHECK(Expression::parse("1 + 2*3").eval(0.0) == cplx(7.0));
  CHECK(Expression::parse("-w^2").eval(cplx(0.0, 1.0)) == cplx(1.0));
  CHECK(Expression::parse("2^3^2").eval(0.0).real() == doctest::Approx(512.0));
  CHECK(Expression::parse("|w|").eval(cplx(3.0, 4.0)).real() == doctest::Approx(5.0));
  CHECK(Expression::parse("x + 10*y").eval(cplx(1.0, 2.0)) == cplx(21.0));
  CHECK(Expression::parse("conj(z) * i").eval(cplx(1.0, 1.0)) == cplx(1.0, 1.0));
  CHECK(Expression::parse("exp(re(w))").eval(cplx(1.0, 5.0)).real() == doctest::Approx(std::exp(1.0)));
  CHECK(Expression::parse("2 / (1 - |w|^2)").eval(0.5).real() == doctest::Approx(2.0 / 0.75));
  CHECK(Expression::parse("pi").text() == "pi");
}

TEST_CASE("expression errors name the problem") {
  CHECK_THROWS_AS(Expression::parse("1 +"), InvalidInput);
  CHECK_THROWS_AS(Expression::parse("foo(w)"), InvalidInput);
  CHECK_THROWS_AS(Expression::parse("(w"), InvalidInput);
  CHECK_THROWS_AS(Expression::parse("|w"), InvalidInput);
  CHECK_THROWS_AS(Expression::parse("w w"), InvalidInput);
}

TEST_CASE("builtin curvature is exact") {
  const cplx pts[] = {0.0, cplx(0.3, 0.1), cplx(-0.5, 0.6), cplx(0.9, 0.0)};
  for (cplx w : pts) {
    CHECK(curvature(MetricDensity::euclidean(), w) == 0.0);
    CHECK(curvature(MetricDensity::hyperbolic(), w) == -1.0);
    CHECK(curvature(MetricDensity::spherical(), w) == 1.0);
  }
  CHECK(curvature(MetricDensity::spherical(), cplx(1.0, 2.0)) == 1.0);
}

TEST_CASE("builtin curvature agrees with -lap_log / rho^2") {
  for (const auto& m : {MetricDensity::hyperbolic(), MetricDensity::spherical()}) {
    for (cplx w : {cplx(0.3, 0.1), cplx(-0.2, 0.7), cplx(0.0, 0.0)}) {
      const double r = m.rho(w);
      CHECK(-m.lap_log(w) / (r * r) == doctest::Approx(m.curvature(w)).epsilon(1e-14));
    }
  }
}

TEST_CASE("dlog closed forms") {
  CHECK(dlog_w(MetricDensity::euclidean(), cplx(0.4, 0.2)) == cplx(0.0));
  CHECK(std::abs(dlog_w(MetricDensity::hyperbolic(), 0.5) - 0.5 / 0.75) < 1e-15);
  const cplx w(0.2, -0.3);
  CHECK(std::abs(dlog_w(MetricDensity::spherical(), w) + std::conj(w) / (1.0 + std::norm(w))) < 1e-15);
  // rho = e^{Re w}: log rho = (w + conj w)/2.
  const auto m = make_custom("exp(re(w))");
  for (cplx p : {cplx(0.0), cplx(0.5, -0.3), cplx(-1.2, 0.8)}) CHECK(std::abs(dlog_w(m, p) - 0.5) < 1e-9);
}

TEST_CASE("custom density matches builtin hyperbolic") {
  const auto custom = make_custom("2 / (1 - |w|^2)", MetricDensity::kDefaultFdStep, 0.95);
  const auto builtin = MetricDensity::hyperbolic();
  for (double r : {0.0, 0.3, 0.6, 0.9}) {
    for (double t : {0.0, 1.0, 2.5, 4.0}) {
      const cplx w = std::polar(r, t);
      CHECK(std::abs(curvature(custom, w) + 1.0) < 1e-6);
      CHECK(std::abs(custom.dlog(w) - builtin.dlog(w)) < 1e-8 * (1.0 + std::abs(builtin.dlog(w))));
      CHECK(custom.rho(w) == doctest::Approx(builtin.rho(w)).epsilon(1e-14));
    }
  }
}

TEST_CASE("custom density e^{|w|^2} has curvature -4 e^{-2|w|^2}") {
  const auto m = make_custom("exp(|w|^2)");
  for (cplx w : {cplx(0.0), cplx(0.3, 0.4), cplx(-0.8, 0.1)}) {
    CHECK(curvature(m, w) == doctest::Approx(-4.0 * std::exp(-2.0 * std::norm(w))).epsilon(1e-6));
  }
}

TEST_CASE("constant custom density behaves like euclidean") {
  const auto m = make_custom("1");
  for (cplx w : {cplx(0.0), cplx(0.7, -0.2)}) {
    CHECK(m.rho(w) == 1.0);
    CHECK(std::abs(m.dlog(w)) == 0.0);
    CHECK(m.lap_log(w) == 0.0);
    CHECK(m.curvature(w) == 0.0);
  }
}

TEST_CASE("invalid densities are rejected") {
  CHECK_THROWS_AS(make_custom("1 - |w|^2"), InvalidMetric);
  CHECK_THROWS_AS(make_custom("w"), InvalidMetric);
  CHECK_THROWS_AS(make_custom("1", 0.5), InvalidMetric);
  CHECK_THROWS_AS(make_custom("1 +"), InvalidInput);
  CHECK_THROWS_AS(MetricDensity::hyperbolic(0.0), InvalidMetric);
}

TEST_CASE("hyperbolic valid region enforces the margin") {
  const auto m = MetricDensity::hyperbolic(0.01);
  CHECK(m.valid(0.98));
  CHECK_FALSE(m.valid(0.995));
  CHECK_THROWS_AS(m.rho(0.995), DomainError);
  CHECK_THROWS_AS(m.dlog(cplx(0.0, 1.0)), DomainError);
  CHECK_FALSE(m.valid(cplx(std::nan(""), 0.0)));
}
