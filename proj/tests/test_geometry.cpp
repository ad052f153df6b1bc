#include <doctest.h>

#include <cmath>

#include "blab/error.hpp"
#include "blab/geometry.hpp"
#include "blab/quadrature.hpp"

using namespace blab;

namespace {
template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected blab::Error");
  return Errc::Usage;
}
}  // namespace

TEST_CASE("unit disc rasterization counts about pi/h^2 cells") {
  GridDomain g = rasterize(DomainSpec::unit_disc(), 1.0 / 64);
  const double expect = std::numbers::pi * 64 * 64;
  CHECK(std::abs(g.count() - expect) / expect < 0.02);
  for (std::size_t p = 0; p < g.size(); ++p)
    if (g.inside(p)) CHECK(g.delta[p] > 0);
}

TEST_CASE("rasterize rejects bad spacing and unsupported specs") {
  CHECK(code_of([] { rasterize(DomainSpec::unit_disc(), 0.0); }) == Errc::NonPositiveSpacing);
  CHECK(code_of([] { rasterize(DomainSpec::unit_disc(), 0.5); }) == Errc::InvalidSpec);
  auto bi = DomainSpec::product(DomainSpec::unit_disc(), DomainSpec::unit_disc());
  CHECK(code_of([&] { rasterize(bi, 0.05); }) == Errc::UnsupportedSpec);
}

TEST_CASE("distance to boundary") {
  auto d = DomainSpec::unit_disc();
  CHECK(d.distance_to_boundary(cplx(0.5, 0)) == doctest::Approx(0.5));
  auto s = DomainSpec::slit_disc();
  CHECK(s.distance_to_boundary(cplx(-0.25, 0)) == doctest::Approx(0.25));
  CHECK(s.distance_to_boundary(cplx(0.5, 0.1)) == doctest::Approx(0.1));
  CHECK(code_of([&] { d.distance_to_boundary(cplx(2, 0)); }) == Errc::PointOutsideDomain);
  CHECK(code_of([&] { s.distance_to_boundary(cplx(0.5, 0)); }) == Errc::PointOutsideDomain);
  auto ball = DomainSpec::reinhardt(2, 2);
  CHECK(ball.distance_to_boundary(Point2{cplx(0.3, 0), cplx(0, 0.4)}) == doctest::Approx(0.5).epsilon(1e-9));
  auto bi = DomainSpec::product(DomainSpec::unit_disc(), DomainSpec::unit_disc());
  CHECK(bi.distance_to_boundary(Point2{cplx(0.5, 0), cplx(0.1, 0)}) == doctest::Approx(0.5));
}

TEST_CASE("collar levels") {
  CHECK(collar_level(0.6) == 0);
  CHECK(collar_level(0.5) == 1);
  CHECK(collar_level(0.3) == 1);
  CHECK(collar_level(0.25) == 2);
  CHECK(collar_level(std::ldexp(1.0, -10)) == 10);
  CHECK(collar_level(0.7 * std::ldexp(1.0, -10)) == 10);
  GridDomain g = rasterize(DomainSpec::unit_disc(), 1.0 / 32);
  CollarPartition cp = collar_partition(g, 4);
  std::size_t total = cp.core.cells.size() + cp.remainder.cells.size();
  for (const auto& c : cp.collars) total += c.cells.size();
  CHECK(total == g.count());
}

TEST_CASE("polygon validation and JSON round trip") {
  CHECK(code_of([] { DomainSpec::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}); }) == Errc::InvalidSpec);
  auto sq = DomainSpec::square(1.0);
  CHECK(DomainSpec::from_json(sq.to_json()).canonical() == sq.canonical());
  CHECK(sq.area() == doctest::Approx(4.0));
  auto bi = DomainSpec::product(DomainSpec::unit_disc(), DomainSpec::slit_disc());
  CHECK(DomainSpec::from_json(json::parse(bi.canonical())).canonical() == bi.canonical());
  CHECK(code_of([] { DomainSpec::from_json({{"type", "torus"}}); }) == Errc::InvalidSpec);
}

TEST_CASE("grid fingerprints separate spacings") {
  auto d = DomainSpec::unit_disc();
  CHECK(rasterize(d, 1.0 / 32).fingerprint() == rasterize(d, 1.0 / 32).fingerprint());
  CHECK(rasterize(d, 1.0 / 32).fingerprint() != rasterize(d, 1.0 / 64).fingerprint());
}

TEST_CASE("segment crossing detects the slit") {
  auto s = DomainSpec::slit_disc();
  auto t = s.first_crossing(cplx(0.5, 0.1), cplx(0.5, -0.1));
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(0.5));
  CHECK_FALSE(s.first_crossing(cplx(-0.5, 0.1), cplx(-0.5, -0.1)).has_value());
}

TEST_CASE("grid quadrature totals") {
  auto d = DomainSpec::unit_disc();
  GridDomain g = rasterize(d, 1.0 / 64);
  const double e0 = std::abs(build_quadrature(g, 0).total_weight() - std::numbers::pi);
  const double e3 = std::abs(build_quadrature(g, 3).total_weight() - std::numbers::pi);
  CHECK(e3 / std::numbers::pi < 0.01);
  CHECK(e3 < e0);
  GridDomain sq = rasterize(DomainSpec::square(1.0), 1.0 / 64);
  CHECK(build_quadrature(sq, 3).total_weight() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("fitted rules integrate the area exactly") {
  CHECK(fitted_quadrature(DomainSpec::unit_disc()).total_weight() == doctest::Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(fitted_quadrature(DomainSpec::slit_disc()).total_weight() == doctest::Approx(std::numbers::pi).epsilon(1e-10));
  CHECK(fitted_quadrature(DomainSpec::annulus(0.5)).total_weight() ==
        doctest::Approx(0.75 * std::numbers::pi).epsilon(1e-12));
  CHECK(fitted_quadrature(DomainSpec::square(1.0)).total_weight() == doctest::Approx(4.0).epsilon(1e-12));
  Rule1D r = graded_rule(0, 1, true, false, 30);
  double s = 0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] / std::sqrt(r.x[i]);
  CHECK(s == doctest::Approx(2.0).epsilon(1e-5));
}
