#include <doctest.h>

#include <cmath>

#include "blab/capacity.hpp"
#include "blab/error.hpp"
#include "oracles.hpp"

using namespace blab;

TEST_CASE("interval and circle capacities") {
  FeketeOptions o;
  o.restarts = 2;
  CHECK(capacity_estimate(CompactSetSpec(Interval{-1, 1}), 32, o).value == doctest::Approx(0.5).epsilon(0.05));
  CHECK(capacity_estimate(CompactSetSpec(Circle{0.7}), 32, o).value == doctest::Approx(0.7).epsilon(0.02));
}

TEST_CASE("capacity scales linearly") {
  FeketeOptions o;
  o.restarts = 2;
  CompactSetSpec s(Interval{0, 1});
  double c1 = capacity_estimate(s, 16, o).value;
  double c3 = capacity_estimate(s.scaled(3), 16, o).value;
  CHECK(c3 == doctest::Approx(3 * c1).epsilon(1e-6));
}

TEST_CASE("fekete edge cases") {
  CompactSetSpec two(FinitePoints{{cplx(0), cplx(1)}});
  CHECK(fekete_points(two, 3).d_n == 0.0);
  CHECK(fekete_points(two, 2).d_n == doctest::Approx(1.0));
  CHECK_THROWS_AS(fekete_points(CompactSetSpec(FinitePoints{{cplx(2)}}), 2), Error);
  FeketeOptions o;
  o.restarts = 3;
  auto a = fekete_points(CompactSetSpec(Circle{1}), 12, o);
  auto b = fekete_points(CompactSetSpec(Circle{1}), 12, o);
  CHECK(a.d_n == b.d_n);
}

TEST_CASE("spec round trip and validation") {
  CantorLinear c;
  c.lambda = 0.25;
  c.levels = 3;
  CompactSetSpec s(c);
  CHECK(CompactSetSpec::from_json(s.to_json()).to_json() == s.to_json());
  CHECK_THROWS_AS(CompactSetSpec::from_json({{"type", "cantor_linear"}, {"lambda", 0.6}, {"levels", 3}}), Error);
  CHECK(s.candidates(64).size() == 64);
}

TEST_CASE("Moran dimension and planar bound") {
  CHECK(moran_dimension({1.0 / 3, 1.0 / 3}) == doctest::Approx(oracle::log2_over_log3).epsilon(1e-12));
  CHECK(moran_dimension({0.25, 0.25}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(beta_upper_planar(0.0) == 2.0);
  CHECK(beta_upper_planar(0.5) == doctest::Approx(3.0));
  CHECK_THROWS_AS(moran_dimension({1.0, 0.5}), Error);
  CHECK_THROWS_AS(beta_upper_planar(1.0), Error);
}
