#include <doctest.h>

#include <cmath>

#include "blab/conformal.hpp"
#include "blab/error.hpp"
#include "blab/potential.hpp"
#include "oracles.hpp"

using namespace blab;

namespace {
std::shared_ptr<const GridDomain> disc_grid(double h) {
  return std::make_shared<const GridDomain>(rasterize(DomainSpec::unit_disc(), h));
}
}  // namespace

TEST_CASE("extremal function of a centered ball in the disc") {
  auto g = disc_grid(1.0 / 64);
  SolveStats st;
  ScalarField rho = extremal_numeric(g, BallSpec{0.0, 0.25}, 1e-9, &st);
  CHECK(st.sweeps > 0);
  double err = 0;
  for (std::size_t p = 0; p < g->size(); ++p) {
    if (!g->inside(p)) continue;
    CHECK(rho[p] <= 0);
    CHECK(rho[p] >= -1 - 1e-12);
    if (g->delta[p] > 4 * g->h) err = std::max(err, std::abs(rho[p] - oracle::disc_extremal(g->center(p), 0.25)));
  }
  CHECK(err < 2e-2);
}

TEST_CASE("extremal solver rejects balls near the boundary") {
  auto g = disc_grid(1.0 / 32);
  CHECK_THROWS_AS(extremal_numeric(g, BallSpec{cplx(0.9, 0), 0.2}, 1e-8), Error);
}

TEST_CASE("numeric Green function against the Moebius form") {
  auto g = disc_grid(1.0 / 64);
  const cplx w(0.3, -0.1);
  GreenField G = green_numeric(g, w, 1e-10);
  double err = 0;
  for (std::size_t p = 0; p < g->size(); ++p)
    if (g->inside(p) && g->delta[p] > 4 * g->h && std::isfinite(G.field[p]))
      err = std::max(err, std::abs(G.field[p] - oracle::disc_green(g->center(p), w)));
  CHECK(err < 2e-2);
  CHECK(G.evaluate(cplx(-0.2, 0.4)) == doctest::Approx(oracle::disc_green(cplx(-0.2, 0.4), w)).epsilon(2e-2));
}

TEST_CASE("Green symmetry") {
  auto g = disc_grid(1.0 / 64);
  const cplx a(0.2, 0.1), b(-0.4, 0.3);
  double gab = green_numeric(g, a, 1e-10).evaluate(b);
  double gba = green_numeric(g, b, 1e-10).evaluate(a);
  CHECK(std::abs(gab - gba) < 1e-2);
}

TEST_CASE("mu and nu") {
  CHECK(mu_of(0.0) == 0.0);
  CHECK(mu_of(-1.0) == doctest::Approx(1.0));
  CHECK(mu_of(-std::exp(-2.0)) == doctest::Approx(std::exp(-2.0) / 3));
  CHECK(nu_of(-std::exp(-2.0), 2) == doctest::Approx(std::exp(-2.0) * 9));
  CHECK(nu_of(-0.5, 1) >= mu_of(-0.5));
}

TEST_CASE("product Green is the max of the factors") {
  auto bi = DomainSpec::product(DomainSpec::unit_disc(), DomainSpec::unit_disc());
  const Point2 pole{cplx(0.1, 0), cplx(0, -0.2)};
  Field2 g = product_green(bi, pole);
  const Point2 z{cplx(0.5, 0.2), cplx(-0.3, 0.1)};
  double expect = std::max(oracle::disc_green(z.z1, pole.z1), oracle::disc_green(z.z2, pole.z2));
  CHECK(g(z) == doctest::Approx(expect));
}

TEST_CASE("inclusion constant on closed forms") {
  auto g = disc_grid(1.0 / 64);
  DiscModel dm;
  ScalarField green = sample_field(g, [&](cplx z) { return dm.green(z, 0.5); }, FieldKind::Green);
  ScalarField rho = sample_field(g, [](cplx z) { return oracle::disc_extremal(z, 0.25); }, FieldKind::Extremal);
  double c = inclusion_constant(green, rho, mu_of(oracle::disc_extremal(0.5, 0.25)), InclusionDirection::Lower);
  CHECK(c > 0);
  CHECK(std::isfinite(c));
}

TEST_CASE("quasi Hoelder fit is deterministic and nonnegative") {
  auto g = disc_grid(1.0 / 32);
  ScalarField rho = sample_field(g, [](cplx z) { return oracle::disc_extremal(z, 0.25); }, FieldKind::Extremal);
  double a = quasi_holder_fit(rho, 1.5, 1.0, 2000, 9);
  CHECK(a >= 0);
  CHECK(a == quasi_holder_fit(rho, 1.5, 1.0, 2000, 9));
}

TEST_CASE("ratio interpolant reproduces the sampled function between cells") {
  auto g = disc_grid(1.0 / 64);
  ScalarField rho = sample_field(g, [](cplx z) { return oracle::disc_extremal(z, 0.25); }, FieldKind::Extremal);
  RatioInterpolant fine(rho, [](cplx z) { return std::log(std::abs(z)); });
  for (cplx z : {cplx(0.999, 0), cplx(0.6, 0.7), cplx(-0.5, -0.3)})
    CHECK(fine(z) == doctest::Approx(oracle::disc_extremal(z, 0.25)).epsilon(1e-3));
}

TEST_CASE("default ball stays inside domains with a hole") {
  GridDomain g = rasterize(DomainSpec::annulus(0.4), 1.0 / 32);
  BallSpec b = default_ball(g);
  CHECK(b.radius > 0.05);
  CHECK(std::abs(b.center) - b.radius > 0.4);
  CHECK(std::abs(b.center) + b.radius < 1.0);
}
