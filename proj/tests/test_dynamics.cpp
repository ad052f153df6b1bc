#include <doctest.h>

#include <cmath>

#include "blab/dynamics.hpp"
#include "blab/error.hpp"
#include "oracles.hpp"

using namespace blab;

TEST_CASE("polynomial parsing") {
  PolynomialMap q = PolynomialMap::parse("1,0,-2");
  CHECK(q.degree() == 2);
  CHECK(q.coeffs()[0] == cplx(-2));
  CHECK(q(cplx(3)) == cplx(7));
  CHECK(q.deriv(cplx(3)) == cplx(6));
  CHECK(q.escape_radius() >= 2);
}

TEST_CASE("escape Green function of z^2 - 2") {
  PolynomialMap q({-2, 0, 1});
  CHECK(escape_green(q, 3.0).g == doctest::Approx(oracle::joukowski_green_at_3).epsilon(1e-12));
  for (cplx w : {cplx(2.5, 0), cplx(0, 2.5), cplx(-1.8, 1.8), cplx(4, -3)}) {
    EscapeResult r = escape_green(q, w);
    CHECK(std::abs(r.g - oracle::joukowski_green(w)) <= 1e-8);
    CHECK(r.err <= 1e-8);
  }
}

TEST_CASE("escape Green function of z^2") {
  PolynomialMap q({0, 0, 1});
  EscapeResult r = escape_green(q, 2.0);
  CHECK(r.g == doctest::Approx(std::log(2.0)));
  CHECK(std::abs(r.gradient) == doctest::Approx(0.5).epsilon(1e-9));
  DistanceBracket d = julia_distance(q, 2.0);
  CHECK(d.lower <= 1.0);
  CHECK(d.upper >= 1.0);
  CHECK_THROWS_AS(escape_green(q, 0.5), Error);
}

TEST_CASE("basin alpha") {
  BasinOptions o;
  o.rays = 32;
  o.levels = 6;
  double a = basin_alpha(PolynomialMap({-2, 0, 1}), o).estimate.value;
  CHECK(a == doctest::Approx(0.5).epsilon(0.2));
  o.seed = 11;
  double b = basin_alpha(PolynomialMap({-2, 0, 1}), o).estimate.value;
  CHECK(std::abs(a - b) <= 0.05);
}
