#include <doctest.h>

#include <cmath>
#include <random>

#include "blab/bergman.hpp"
#include "blab/error.hpp"
#include "oracles.hpp"

using namespace blab;

namespace {
struct DiscBasis {
  QuadratureRule quad = fitted_quadrature(DomainSpec::unit_disc());
  OrthoBasis basis = gram(quad, 30, DomainSpec::unit_disc());
};
const DiscBasis& disc() {
  static const DiscBasis b;
  return b;
}
}  // namespace

TEST_CASE("Gram kernel on the disc") {
  const auto& d = disc();
  CHECK(d.basis.effective_dim() == 31);
  CHECK(orthonormality_defect(d.basis, d.quad) < 1e-10);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-0.7, 0.7);
  for (int i = 0; i < 50;) {
    cplx z(U(rng), U(rng)), w(U(rng), U(rng));
    if (std::abs(z) > 0.7 || std::abs(w) > 0.7) continue;
    ++i;
    cplx ex = oracle::disc_kernel(z, w);
    CHECK(std::abs(d.basis.K(z, w) - ex) / std::abs(ex) < 1e-6);
  }
  CHECK(d.basis.metric(0.0) == doctest::Approx(2.0).epsilon(1e-8));
  KernelValue kv = kernel(d.basis, 0.2, 0.2);
  CHECK(kv.B == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("basis larger than the rule is rejected") {
  GridDomain g = rasterize(DomainSpec::unit_disc(), 1.0 / 8);
  QuadratureRule q = build_quadrature(g, 0);
  CHECK_THROWS_AS(gram(q, static_cast<int>(q.size()) + 5, DomainSpec::unit_disc()), Error);
}

TEST_CASE("reproducing identities") {
  const auto& d = disc();
  for (int k = 0; k <= 10; ++k) {
    std::vector<cplx> f;
    for (const auto& n : d.quad.nodes) f.push_back(std::pow(n.z, k));
    Projection P = projection(d.basis, f, d.quad);
    cplx z(0.3, 0.2);
    CHECK(std::abs(P(z) - std::pow(z, k)) <= 1e-6 * std::max(1e-3, std::abs(std::pow(z, k))));
  }
  std::vector<cplx> one(d.quad.size(), 1.0), id;
  for (const auto& n : d.quad.nodes) id.push_back(n.z);
  ConformalKernel ck(conformal_model(DomainSpec::unit_disc()));
  CHECK(std::abs(berezin(ck, one, cplx(0.4, -0.1), d.quad) - 1.0) < 1e-4);
  CHECK(std::abs(berezin(ck, id, cplx(0.4, -0.1), d.quad) - cplx(0.4, -0.1)) < 1e-4);
}

TEST_CASE("Lp collar scans on the disc converge") {
  const auto& d = disc();
  ConformalKernel ck(conformal_model(DomainSpec::unit_disc()));
  LpOptions o;
  o.min_width = std::ldexp(1.0, -12);
  for (double p : {2.0, 4.0, 8.0}) CHECK(lp_collar_scan(ck, 0.1, p, d.quad, o).verdict == Verdict::Converged);
  CHECK(kp_lower(ck, 0.0, 2.0, d.quad, o) == doctest::Approx(1 / std::sqrt(oracle::pi)).epsilon(1e-6));
}

TEST_CASE("closed form kernels") {
  KernelValue v = kernel_exact(DomainSpec::unit_disc(), cplx(0.2), cplx(0.2));
  CHECK(v.K_z == doctest::Approx(oracle::disc_kernel(0.2, 0.2).real()));
  auto bi = DomainSpec::product(DomainSpec::unit_disc(), DomainSpec::unit_disc());
  KernelValue pv = kernel_exact(bi, Point2{0.0, 0.0}, Point2{0.0, 0.0});
  CHECK(pv.K_z == doctest::Approx(1 / (oracle::pi * oracle::pi)));
  KernelValue bv = kernel_exact(DomainSpec::reinhardt(2, 2), Point2{0.0, 0.0}, Point2{0.0, 0.0});
  CHECK(bv.K_z == doctest::Approx(oracle::ball_kernel_at_0));
}

TEST_CASE("Reinhardt norms") {
  for (auto [j, k] : {std::pair{0, 0}, std::pair{2, 1}, std::pair{1, 3}})
    CHECK(reinhardt_norm2_exact(2, 4, j, k) ==
          doctest::Approx(oracle::reinhardt_norm2_numeric(2, 4, j, k)).epsilon(1e-8));
  ReinhardtBasis rb = reinhardt_gram(2, 2, 12);
  CHECK(rb.K(Point2{0.0, 0.0}, Point2{0.0, 0.0}).real() == doctest::Approx(oracle::ball_kernel_at_0).epsilon(1e-6));
}

TEST_CASE("grid geodesics on the disc") {
  auto g = std::make_shared<const GridDomain>(rasterize(DomainSpec::unit_disc(), 1.0 / 64));
  ConformalKernel ck(conformal_model(DomainSpec::unit_disc()));
  GeodesicField gf = bergman_geodesics(g, 0.0, [&](cplx z) { return ck.metric(z); });
  CHECK(gf.to(cplx(0.5, 0)) == doctest::Approx(oracle::disc_bergman_distance(0.5)).epsilon(0.02));
  Distances d = distances([&](cplx z) { return ck.metric(z); }, ck, g, 0.0, cplx(0, 0.5));
  CHECK(d.d_B_upper >= std::sqrt(2.0) * d.d_S - 0.02);
  CHECK(d.D_B == doctest::Approx(-std::log(std::pow(1 - 0.25, 2))).epsilon(1e-9));
}
