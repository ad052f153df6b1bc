#include <doctest.h>

#include <cmath>
#include <limits>

#include "blab/error.hpp"
#include "blab/fixtures.hpp"
#include "blab/indices.hpp"
#include "blab/verify.hpp"

using namespace blab;

TEST_CASE("closed-form bounds") {
  CHECK(beta_bound_main(1.0, 1) == doctest::Approx(4.0));
  CHECK(beta_bound_main(0.5, 1) == doctest::Approx(2 + 1.0 / 1.5));
  CHECK(beta_bound_main(1.0, 2) == doctest::Approx(2 + 2.0 / 3));
  CHECK(beta_bound_main(1.7, 1) == beta_bound_main(1.0, 1));
  CHECK(beta_bound_planar(0.5) == doctest::Approx(3.0));
  CHECK(std::isinf(beta_bound_planar(1.0)));
  CHECK(holder_transport(0.5, 0.5) == doctest::Approx(0.25));
  CHECK_THROWS_AS(holder_transport(1.5, 0.5), Error);
}

TEST_CASE("least squares") {
  LineFit f = least_squares({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
}

TEST_CASE("alpha on the disc") {
  RunConfig cfg;
  cfg.h = 1.0 / 128;
  FixtureSet fx(cfg);
  IndexEstimate a = fx.alpha(DomainSpec::unit_disc(), cfg.h);
  CHECK(a.value == doctest::Approx(1.0).epsilon(0.06));
  CHECK(a.fit_range.size() == 3);
}

TEST_CASE("alpha is invariant under rotation and scaling") {
  RunConfig cfg;
  cfg.h = 1.0 / 128;
  FixtureSet fx(cfg);
  double a0 = fx.alpha(DomainSpec::square(1.0), cfg.h).value;
  std::vector<cplx> v;
  const cplx rot = std::polar(0.8, 0.3);
  for (cplx c : {cplx(-1, -1), cplx(1, -1), cplx(1, 1), cplx(-1, 1)}) v.push_back(rot * c);
  // same cell count across the square keeps the discretization comparable
  double a1 = fx.alpha(DomainSpec::polygon(v), cfg.h * 0.8).value;
  CHECK(std::abs(a0 - a1) <= 0.05);
}

TEST_CASE("alpha needs enough collars") {
  auto g = std::make_shared<const GridDomain>(rasterize(DomainSpec::unit_disc(), 1.0 / 8));
  ScalarField rho = extremal_numeric(g, BallSpec{0.0, 0.25}, 1e-8);
  CHECK_THROWS_AS(estimate_alpha(rho), Error);
}

TEST_CASE("beta on the disc is infinite") {
  RunConfig cfg;
  FixtureSet fx(cfg);
  auto spec = DomainSpec::unit_disc();
  IndexEstimate b = estimate_beta(*fx.kernel(spec), *fx.rule_near(spec, 0.3), 0.3, {2, 4, 6, 8}, fx.lp_options(spec));
  CHECK(std::isinf(b.value));
}

TEST_CASE("verify registry") {
  CHECK(check_ids().size() == 18);
  RunConfig cfg;
  FixtureSet fx(cfg);
  CHECK_THROWS_AS(verify("NOPE", fx), Error);
  VerifyReport r = verify("PROP_PLANAR", fx);
  CHECK(r.status == Status::Pass);
  json j = r.to_json();
  CHECK(j.contains("check_id"));
  CHECK_FALSE(j.contains("runtime_s"));
  CHECK(r.to_json(true).contains("runtime_s"));
}
