// One PASS/FAIL line per acceptance criterion; exit status 1 if any line fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/cli.hpp"
#include "blab/bergman.hpp"
#include "blab/capacity.hpp"
#include "blab/conformal.hpp"
#include "blab/dynamics.hpp"
#include "blab/fixtures.hpp"
#include "blab/indices.hpp"
#include "blab/io.hpp"
#include "blab/potential.hpp"
#include "blab/verify.hpp"
#include "oracles.hpp"

using namespace blab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void line(int id, bool ok, const std::string& detail) {
  std::printf("[%s] %2d  %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

bool passes(const std::string& id, FixtureSet& fx, std::string& detail) {
  VerifyReport r = verify(id, fx);
  detail += id + "=" + status_name(r.status) + " ";
  return r.status == Status::Pass;
}

void kernel_oracle() {
  auto t0 = std::chrono::steady_clock::now();
  auto spec = DomainSpec::unit_disc();
  QuadratureRule fitted = fitted_quadrature(spec);
  OrthoBasis b = gram(fitted, 40, spec);
  const double t_fit = seconds_since(t0);
  GridDomain g = rasterize(spec, 1.0 / 256);
  OrthoBasis bg = gram(build_quadrature(g, 3), 40, spec);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(-0.8, 0.8);
  double err = 0, err_grid = 0;
  for (int i = 0; i < 100;) {
    cplx z(U(rng), U(rng)), w(U(rng), U(rng));
    if (std::abs(z) >= 0.8 || std::abs(w) >= 0.8) continue;
    ++i;
    cplx ex = oracle::disc_kernel(z, w);
    err = std::max(err, std::abs(b.K(z, w) - ex) / std::abs(ex));
    err_grid = std::max(err_grid, std::abs(bg.K(z, w) - ex) / std::abs(ex));
  }
  line(1, err <= 1e-6 && t_fit < 30,
       fmt("disc Gram kernel N=40, fitted rule: max rel err %.2e (<= 1e-6), %.1f s; grid rule h=1/256 depth 3: %.2e",
           err, t_fit, err_grid));
}

void green_oracle() {
  const double h = 1.0 / 256;
  auto g = std::make_shared<const GridDomain>(rasterize(DomainSpec::unit_disc(), h));
  const cplx a(0.3, -0.1), b(-0.4, 0.35);
  GreenField ga = green_numeric(g, a, 1e-10), gb = green_numeric(g, b, 1e-10);
  double err = 0;
  for (std::size_t p = 0; p < g->size(); ++p)
    if (g->inside(p) && g->delta[p] > 4 * h && std::isfinite(ga.field[p]))
      err = std::max(err, std::abs(ga.field[p] - oracle::disc_green(g->center(p), a)));
  const double sym = std::abs(ga.evaluate(b) - gb.evaluate(a));
  line(2, err <= 5e-3 && sym <= 5e-3, fmt("disc Green h=1/256: max abs err %.2e, symmetry defect %.2e (both <= 5e-3)", err, sym));
}

void extremal_oracle() {
  const double h = 1.0 / 256;
  auto g = std::make_shared<const GridDomain>(rasterize(DomainSpec::unit_disc(), h));
  ScalarField rho = extremal_numeric(g, BallSpec{0.0, 0.25}, 1e-8);
  double err = 0;
  for (std::size_t p = 0; p < g->size(); ++p)
    if (g->inside(p) && g->delta[p] > 4 * h)
      err = std::max(err, std::abs(rho[p] - oracle::disc_extremal(g->center(p), 0.25)));
  line(3, err <= 5e-3, fmt("disc extremal of B(0,1/4): sup err %.2e (<= 5e-3)", err));
}

void alpha_suite(FixtureSet& fx) {
  const double h = fx.config().h;
  double d = fx.alpha(DomainSpec::unit_disc(), h).value;
  double s = fx.alpha(DomainSpec::square(), h).value;
  double sl = fx.alpha(DomainSpec::slit_disc(), h).value;
  bool ok = d >= 0.95 && d <= 1.05 && s >= 0.9 && s <= 1.05 && sl >= 0.42 && sl <= 0.58;
  line(4, ok, fmt("alpha disc %.4f [0.95,1.05], square %.4f [0.9,1.05], slit %.4f [0.42,0.58]", d, s, sl));
}

void beta_suite(FixtureSet& fx) {
  auto disc = DomainSpec::unit_disc();
  const cplx w = 0.3;
  auto kd = fx.kernel(disc);
  auto qd = fx.rule_near(disc, w);
  bool disc_ok = true;
  for (double p = 2; p <= 8; p += 0.5)
    disc_ok = disc_ok && lp_collar_scan(*kd, w, p, *qd, fx.lp_options(disc)).verdict == Verdict::Converged;
  auto slit = DomainSpec::slit_disc();
  const cplx ws(-0.5, 0);
  IndexEstimate b = estimate_beta(*fx.kernel(slit), *fx.rule_near(slit, ws), ws, fx.config().p_grid, fx.lp_options(slit));
  std::string detail;
  bool thm = passes("THM_1D_BETA", fx, detail);
  line(5, disc_ok && b.value >= 3.6 && b.value <= 4.4 && thm,
       fmt("disc p=2..8 all converge: %s; slit beta %.3f [3.6,4.4]; %s", disc_ok ? "yes" : "no", b.value,
           detail.c_str()));
}

void planar_formula(FixtureSet& fx) {
  const double d0 = beta_upper_planar(0.0), d12 = beta_upper_planar(moran_dimension({0.25, 0.25}));
  std::string detail;
  bool ok = d0 == 2.0 && std::abs(d12 - 3.0) < 1e-12 && passes("PROP_PLANAR", fx, detail);
  line(6, ok, fmt("dim 0 -> %.15g, dim 1/2 -> %.15g; %s", d0, d12, detail.c_str()));
}

void by_checks(int id, const std::vector<std::string>& ids, FixtureSet& fx, const std::string& what) {
  std::string detail;
  bool ok = true;
  for (const auto& c : ids) ok = passes(c, fx, detail) && ok;
  line(id, ok, what + ": " + detail);
}

void distances_check(FixtureSet& fx) {
  auto spec = DomainSpec::unit_disc();
  auto g = fx.grid(spec, fx.config().h);
  ConformalKernel ck(conformal_model(spec));
  GeodesicField gf = bergman_geodesics(g, 0.0, [&](cplx z) { return ck.metric(z); });
  double worst = 0;
  for (double r : {0.25, 0.5, 0.75, 0.9, 0.95})
    for (cplx dir : {cplx(1, 0), cplx(0, -1), std::polar(1.0, oracle::pi / 4), std::polar(1.0, 5 * oracle::pi / 4)}) {
      const cplx z = r * dir;
      worst = std::max(worst, std::abs(gf.to(z) / oracle::disc_bergman_distance(z) - 1));
    }
  std::string detail;
  bool cor = passes("COR_1_4", fx, detail);
  line(10, worst <= 0.02 && cor, fmt("disc grid geodesic max rel dev %.4f (<= 0.02); %s", worst, detail.c_str()));
}

void capacity_check() {
  auto t0 = std::chrono::steady_clock::now();
  double ci = capacity_estimate(CompactSetSpec(Interval{-1, 1}), 64).value;
  double cc = capacity_estimate(CompactSetSpec(Circle{0.7}), 64).value;
  double t = seconds_since(t0);
  bool ok = std::abs(ci - 0.5) <= 0.025 && std::abs(cc - 0.7) <= 0.014 && t < 60;
  line(12, ok, fmt("interval(-1,1) %.5f (0.5 +- 5%%), circle(0.7) %.5f (0.7 +- 2%%), %.1f s (< 60)", ci, cc, t));
}

void dynamics_check() {
  PolynomialMap qj({-2, 0, 1});
  double err = 0;
  for (double r : {2.5, 3.0, 5.0, 20.0})
    for (int k = 0; k < 16; ++k) {
      const cplx w = std::polar(r, 2 * oracle::pi * k / 16 + 0.1);
      err = std::max(err, std::abs(escape_green(qj, w).g - oracle::joukowski_green(w)));
    }
  BasinOptions o;
  double a2 = basin_alpha(PolynomialMap({0, 0, 1}), o).estimate.value;
  double aj = basin_alpha(qj, o).estimate.value;
  double ab = basin_alpha(PolynomialMap({-1, 0, 1}), o).estimate.value;
  o.seed = 11;
  double ab2 = basin_alpha(PolynomialMap({-1, 0, 1}), o).estimate.value;
  bool ok = err <= 1e-8 && a2 >= 0.95 && a2 <= 1.05 && aj >= 0.4 && aj <= 0.6 && ab >= 0.1 &&
            std::abs(ab - ab2) <= 0.05;
  line(13, ok,
       fmt("Joukowski err %.1e (<= 1e-8); basin alpha z^2 %.4f, z^2-2 %.4f, z^2-1 %.4f (seed 11: %.4f)", err, a2, aj,
           ab, ab2));
}

void reproducing(FixtureSet& fx) {
  auto spec = DomainSpec::unit_disc();
  auto quad = fx.fitted(spec);
  auto b = fx.basis(spec, fx.config().N);
  const cplx z0(0.35, -0.2);
  double proj = 0;
  for (int k = 0; k <= 10; ++k) {
    std::vector<cplx> f;
    for (const auto& n : quad->nodes) f.push_back(std::pow(n.z, k));
    Projection P = projection(*b, f, *quad);
    for (cplx z : {z0, cplx(-0.6, 0.1), cplx(0.0, 0.7)})
      proj = std::max(proj, std::abs(P(z) - std::pow(z, k)) / std::max(std::abs(std::pow(z, k)), 1e-300));
  }
  std::vector<cplx> one(quad->size(), 1.0), id;
  for (const auto& n : quad->nodes) id.push_back(n.z);
  auto k = fx.kernel(spec);
  double t1 = std::abs(berezin(*k, one, z0, *quad) - 1.0);
  double tz = std::abs(berezin(*k, id, z0, *quad) - z0);
  line(14, proj <= 1e-6 && t1 <= 1e-4 && tz <= 1e-4,
       fmt("P(z^k) max rel err %.1e (<= 1e-6); Berezin T(1) err %.1e, T(z) err %.1e (<= 1e-4)", proj, t1, tz));
}

std::map<std::string, std::string> verify_all_bytes(const fs::path& out) {
  fs::remove_all(out);
  fs::create_directories(out);
  ::setenv("BERGMAN_LAB_CACHE", (out / "store").c_str(), 1);
  std::vector<std::string> args = {"blab", "--out", out.string(), "--seed", "7", "verify", "all"};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream o, e;
  blab::cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  ::unsetenv("BERGMAN_LAB_CACHE");
  std::map<std::string, std::string> files;
  for (const auto& d : fs::recursive_directory_iterator(out / "reports"))
    if (d.is_regular_file()) files[d.path().filename().string()] = read_file(d.path());
  return files;
}

void determinism() {
  const fs::path base = fs::temp_directory_path() / "blab_acceptance_determinism";
  auto a = verify_all_bytes(base / "a");
  auto b = verify_all_bytes(base / "b");
  bool ok = a.size() == check_ids().size() + 1 && a == b;
  std::size_t differing = 0;
  for (const auto& [name, bytes] : a)
    if (!b.count(name) || b.at(name) != bytes) ++differing;
  line(15, ok, fmt("verify all twice, fresh caches: %zu files each, %zu differ", a.size(), differing));
  fs::remove_all(base);
}

template <class F>
void guarded(int id, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    line(id, false, std::string("error: ") + e.what());
  }
}

}  // namespace

int main() {
  RunConfig cfg;
  FixtureSet fx(cfg);
  guarded(1, kernel_oracle);
  guarded(2, green_oracle);
  guarded(3, extremal_oracle);
  guarded(4, [&] { alpha_suite(fx); });
  guarded(5, [&] { beta_suite(fx); });
  guarded(6, [&] { planar_formula(fx); });
  guarded(7, [&] { by_checks(7, {"PROP_2_1", "PROP_2_5"}, fx, "collar decay exponent and mu-scaled drift"); });
  guarded(8, [&] { by_checks(8, {"PROP_2_6", "PROP_5_1"}, fx, "inclusion constants within factor 10"); });
  guarded(9, [&] { by_checks(9, {"THM_OFFDIAG"}, fx, "off-diagonal ratio drift <= 3 between h and h/2"); });
  guarded(10, [&] { distances_check(fx); });
  guarded(11, [&] { by_checks(11, {"LEM_6_1"}, fx, "Reinhardt (2,4) |K(z,0)-K(0)|/K(0) <= 1e-6"); });
  guarded(12, capacity_check);
  guarded(13, dynamics_check);
  guarded(14, [&] { reproducing(fx); });
  guarded(15, determinism);
  std::printf("%d of 15 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
