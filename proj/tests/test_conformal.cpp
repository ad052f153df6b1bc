#include <doctest.h>

#include "blab/bergman.hpp"
#include "blab/conformal.hpp"
#include "oracles.hpp"

using namespace blab;

TEST_CASE("slit map agrees with the half-plane route") {
  auto m = conformal_model(DomainSpec::slit_disc());
  REQUIRE(m);
  const cplx pts[] = {{-0.5, 0}, {0.3, 0.2}, {0.6, -0.05}, {-0.1, -0.7}, {0.01, 0.001}};
  for (cplx z : pts) {
    CHECK(std::abs(m->inverse(m->map(z)) - z) < 1e-12);
    for (cplx w : pts) {
      if (z == w) continue;
      CHECK(m->green(z, w) == doctest::Approx(oracle::slit_green(z, w)).epsilon(1e-10));
      CHECK(std::abs(m->kernel(z, w) - oracle::slit_kernel(z, w)) <= 1e-9 * std::abs(oracle::slit_kernel(z, w)));
    }
  }
  CHECK(std::abs(m->map(cplx(0.5, 1e-12))) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("disc closed forms") {
  auto m = conformal_model(DomainSpec::unit_disc());
  const cplx z(0.3, 0.4), w(-0.2, 0.1);
  CHECK(std::abs(m->kernel(z, w) - oracle::disc_kernel(z, w)) < 1e-14);
  CHECK(m->green(z, w) == doctest::Approx(oracle::disc_green(z, w)));
  CHECK(m->metric(cplx(0)) == doctest::Approx(2.0));
  CHECK(m->metric(cplx(0.5)) == doctest::Approx(2.0 / (0.75 * 0.75)));
  CHECK(m->bergman_distance(cplx(0), cplx(0.8)) == doctest::Approx(oracle::disc_distance_08));
  CHECK(m->normalized_kernel(z, 0) == doctest::Approx(std::pow(1 - std::norm(z), 2)));
  CHECK(m->normalized_kernel(z, z) == doctest::Approx(1.0));
  CHECK(std::abs(mobius(cplx(0.3, 0.1), 0) - cplx(0.3, 0.1)) < 1e-15);
}

TEST_CASE("no closed form for polygons") { CHECK_FALSE(conformal_model(DomainSpec::square(1.0))); }
