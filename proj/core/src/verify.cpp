#include "blab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <atomic>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "blab/capacity.hpp"
#include "blab/conformal.hpp"
#include "blab/error.hpp"

namespace blab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBetaSlack = 0.15;
constexpr double kSlopeSlack = 0.1;
constexpr double kDecayFloor = 0.85;
constexpr double kLayerExponent = 0.85;
constexpr double kOffdiagPower = 0.9;

json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? json("nan") : json(v > 0 ? "inf" : "-inf");
}

const DomainSpec& disc() {
  static const DomainSpec d = DomainSpec::unit_disc();
  return d;
}
const DomainSpec& slit() {
  static const DomainSpec d = DomainSpec::slit_disc();
  return d;
}
const DomainSpec& square() {
  static const DomainSpec d = DomainSpec::square(1.0);
  return d;
}

std::string tag(const DomainSpec& s) { return s.type_name(); }

// interior reference point and the boundary-approach ray with delta = 2^{-j}
cplx base_point(const DomainSpec& s) { return std::holds_alternative<SlitDisc>(s.variant()) ? cplx(-0.5) : cplx(0); }
cplx approach(const DomainSpec& s, int j) {
  const double t = std::ldexp(1.0, -j);
  return std::holds_alternative<SlitDisc>(s.variant()) ? cplx(-t) : cplx(1 - t);
}

double clamp_alpha(double a) { return std::clamp(a, 1e-6, 1.0); }

double drift(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0 ? *hi / *lo : kInf;
}

// node values of -rho and w |K(., w)|^2, sorted by -rho
struct Layer {
  std::vector<std::pair<double, double>> rv;
  double below(double eps) const {
    double s = 0;
    for (const auto& [r, v] : rv) {
      if (r > eps) break;
      s += v;
    }
    return s;
  }
};

Layer layer(const PlanarKernel& k, cplx w, const QuadratureRule& q, const FineRho& rho) {
  Layer L;
  auto col = k.column(w);
  L.rv.reserve(q.size());
  for (const auto& n : q.nodes) L.rv.emplace_back(-rho(n.z), n.w * std::norm(col(n.z)));
  std::sort(L.rv.begin(), L.rv.end());
  return L;
}

double lp_integral(const PlanarKernel& k, cplx w, double p, const QuadratureRule& q) {
  auto col = k.column(w);
  double s = 0;
  for (const auto& n : q.nodes) s += n.w * std::pow(std::abs(col(n.z)), p);
  return s;
}

std::vector<std::size_t> masked_cells(const GridDomain& g) {
  std::vector<std::size_t> c;
  for (std::size_t p = 0; p < g.size(); ++p)
    if (g.inside(p)) c.push_back(p);
  return c;
}

using CheckFn = std::function<void(FixtureSet&, VerifyReport&)>;

struct CheckDef {
  std::string id;
  std::string statement;
  CheckFn run;
};

void beta_check(FixtureSet& fx, VerifyReport& r, bool planar) {
  const auto& cfg = fx.config();
  bool ok = true;
  json fix = json::array();
  for (const DomainSpec* s : {&disc(), &slit()}) {
    const std::string t = tag(*s);
    const double a = fx.alpha(*s, cfg.h).value;
    auto k = fx.kernel(*s);
    IndexEstimate b;
    try {
      b = estimate_beta(*k, *fx.fitted(*s), base_point(*s), cfg.p_grid, fx.lp_options(*s));
    } catch (const Error& e) {
      if (e.code() != Errc::AllInconclusive) throw;
      r.status = Status::Inconclusive;
      r.note = t + ": every p was inconclusive";
      return;
    }
    const double bound = planar ? beta_bound_planar(a) : beta_bound_main(a, 1);
    r.measured[t + ".alpha_hat"] = a;
    r.measured[t + ".beta_hat"] = b.value;
    r.measured[t + ".bound"] = bound;
    r.measured[t + ".margin"] = std::isinf(bound) && std::isinf(b.value) ? kInf : b.value - (bound - kBetaSlack);
    ok = ok && b.value >= bound - kBetaSlack;
    fix.push_back({{"domain", s->to_json()}, {"w", {base_point(*s).real(), base_point(*s).imag()}},
                   {"kernel", k->source()}, {"scans", b.extra["scans"]}});
  }
  r.fixture = {{"fixtures", fix}, {"n", 1}};
  r.bound = planar ? "2 + alpha/(1 - alpha)" : "2 + 2 alpha/(2n - alpha)";
  r.slack = {{"beta", kBetaSlack}};
  r.status = ok ? Status::Pass : Status::Fail;
}

void thm_main_beta(FixtureSet& fx, VerifyReport& r) { beta_check(fx, r, false); }
void thm_1d_beta(FixtureSet& fx, VerifyReport& r) { beta_check(fx, r, true); }

void eq_1_1(FixtureSet& fx, VerifyReport& r) {
  const auto& cfg = fx.config();
  const double p = 2.5;
  bool ok = true;
  for (const DomainSpec* s : {&disc(), &slit()}) {
    const std::string t = tag(*s);
    const double a = clamp_alpha(fx.alpha(*s, cfg.h).value);
    auto k = fx.kernel(*s);
    FineRho rho = fx.rho(*s, cfg.h);
    std::vector<double> Q;
    for (int j = 2; j <= 7; ++j) {
      const cplx w = approach(*s, j);
      const double I = lp_integral(*k, w, p, *fx.rule_near(*s, w));
      const double mu = mu_of(rho(w));
      Q.push_back(I / std::pow(k->diag(w), p / 2) * std::pow(mu, (p - 2) / a));
      r.measured[t + ".Q_j" + std::to_string(j)] = Q.back();
    }
    const double d = drift(std::vector<double>(Q.end() - 3, Q.end()));
    r.measured[t + ".drift_last3"] = d;
    r.measured[t + ".alpha_hat"] = a;
    ok = ok && d <= 5;
  }
  r.fixture = {{"domains", {"unit_disc", "slit_disc"}}, {"p", p}, {"approach", "delta(w_j) = 2^-j, j = 2..7"}};
  r.bound = 5.0;
  r.tolerances = {{"max_drift_last_three_levels", 5.0}};
  r.status = ok ? Status::Pass : Status::Fail;
}

void cor_kp(FixtureSet& fx, VerifyReport& r) {
  const auto& cfg = fx.config();
  const double p = 2.5;
  bool ok = true;
  for (const DomainSpec* s : {&disc(), &slit()}) {
    const std::string t = tag(*s);
    const double a = clamp_alpha(fx.alpha(*s, cfg.h).value);
    auto k = fx.kernel(*s);
    FineRho rho = fx.rho(*s, cfg.h);
    std::vector<double> R;
    for (int j = 2; j <= 7; ++j) {
      const cplx w = approach(*s, j);
      const double kp = kp_lower(*k, w, p, *fx.rule_near(*s, w), fx.lp_options(*s));
      const double mu = mu_of(rho(w));
      R.push_back(kp / (std::sqrt(k->diag(w)) * std::pow(mu, (p - 2) / (p * a))));
      r.measured[t + ".ratio_j" + std::to_string(j)] = R.back();
    }
    const double mn = *std::min_element(R.begin(), R.end());
    const double d = drift(R);
    r.measured[t + ".min_ratio"] = mn;
    r.measured[t + ".drift"] = d;
    ok = ok && mn > 0 && d <= 5;
  }
  r.fixture = {{"domains", {"unit_disc", "slit_disc"}}, {"p", p}, {"approach", "delta(w_j) = 2^-j, j = 2..7"}};
  r.bound = "min_j ratio > 0 with max/min <= 5";
  r.tolerances = {{"max_drift", 5.0}};
  r.status = ok ? Status::Pass : Status::Fail;
}

std::vector<double> eps_grid(int lo, int hi) {
  std::vector<double> e;
  for (int m = lo; m <= hi; ++m) e.push_back(std::ldexp(1.0, -m));
  return e;
}

void prop_2_1(FixtureSet& fx, VerifyReport& r) {
  const auto& cfg = fx.config();
  bool ok = true;
  for (const DomainSpec* s : {&disc(), &slit()}) {
    const std::string t = tag(*s);
    const cplx w = base_point(*s);
    Layer L = layer(*fx.kernel(*s), w, *fx.rule_near(*s, w), fx.rho(*s, cfg.h));
    std::vector<double> x, y;
    for (double e : eps_grid(4, 9)) {
      x.push_back(std::log(e));
      y.push_back(std::log(L.below(e)));
    }
    const double slope = least_squares(x, y).slope;
    r.measured[t + ".decay_exponent"] = slope;
    ok = ok && slope >= kDecayFloor;
  }
  r.fixture = {{"domains", {"unit_disc", "slit_disc"}}, {"eps", "2^-4 .. 2^-9"}};
  r.bound = kDecayFloor;
  r.status = ok ? Status::Pass : Status::Fail;
}

void prop_2_5(FixtureSet& fx, VerifyReport& r) {
  const auto& cfg = fx.config();
  bool ok = true;
  for (const DomainSpec* s : {&disc(), &slit()}) {
    const std::string t = tag(*s);
    auto k = fx.kernel(*s);
    FineRho rho = fx.rho(*s, cfg.h);
    std::vector<double> C;
    for (int j = 3; j <= 6; ++j) {
      const cplx w = approach(*s, j);
      Layer L = layer(*k, w, *fx.rule_near(*s, w), rho);
      const double mu = mu_of(rho(w));
      const double Kw = k->diag(w);
      double c = 0;
      for (double e : eps_grid(4, 14))
        if (e <= mu) c = std::max(c, L.below(e) / Kw / std::pow(e / mu, kLayerExponent));
      C.push_back(c);
      r.measured[t + ".C_j" + std::to_string(j)] = c;
      r.measured[t + ".mu_j" + std::to_string(j)] = mu;
    }
    const double d = drift(C);
    r.measured[t + ".drift"] = d;
    ok = ok && d <= 5;
  }
  r.fixture = {{"domains", {"unit_disc", "slit_disc"}}, {"eps", "2^-4 .. 2^-14, eps <= mu(w_j)"},
               {"approach", "delta(w_j) = 2^-j, j = 3..6"}, {"r", kLayerExponent}};
  r.bound = 5.0;
  r.tolerances = {{"max_drift", 5.0}};
  r.status = ok ? Status::Pass : Status::Fail;
}

void lem_2_4(FixtureSet& fx, VerifyReport& r) {
  const auto& cfg = fx.config();
  const int samples = 20000;
  const double rr = 1.5;
  struct Case {
    const DomainSpec* s;
    double alpha;
    bool asserted;
  };
  bool ok = true;
  for (Case c : {Case{&disc(), 1.0, true}, Case{&slit(), 0.45, true}, Case{&slit(), 0.9, false}}) {
    const std::string t = tag(*c.s) + ".alpha" + std::to_string(c.alpha).substr(0, 4);
    const double c1 = quasi_holder_fit(*fx.extremal(*c.s, 2 * cfg.h), rr, c.alpha, samples, cfg.seed);
    const double c2 = quasi_holder_fit(*fx.extremal(*c.s, cfg.h), rr, c.alpha, samples, cfg.seed);
    const double ratio = c2 / c1;
    r.measured[t + ".C_h"] = c1;
    r.measured[t + ".C_h_half"] = c2;
    r.measured[t + ".ratio"] = ratio;
    if (c.asserted) ok = ok && ratio >= 0.5 && ratio <= 2;
  }
  r.fixture = {{"domains", {"unit_disc", "slit_disc"}}, {"r", rr}, {"samples", samples},
               {"spacings", {2 * cfg.h, cfg.h}}};
  r.bound = "C(h/2)/C(h) in [1/2, 2]";
  r.note = "slit_disc at alpha 0.9 exceeds the local exponent and is reported without assertion";
  r.status = ok ? Status::Pass : Status::Fail;
}

void inclusion(FixtureSet& fx, VerifyReport& r, InclusionDirection dir) {
  const auto& cfg = fx.config();
  bool ok = true;
  for (const DomainSpec* s : {&disc(), &slit()}) {
    const std::string t = tag(*s);
    auto m = conformal_model(*s);
    auto rho = fx.extremal(*s, cfg.h);
    FineRho fine = fx.rho(*s, cfg.h);
    std::vector<double> C;
    for (int j = 2; j <= 6; ++j) {
      const cplx w = approach(*s, j);
      ScalarField g = sample_field(rho->grid, [&](cplx z) { return m->green(z, w); }, FieldKind::Green);
      const double rw = fine(w);
      const double weight = dir == InclusionDirection::Lower ? mu_of(rw) : nu_of(rw, 1);
      C.push_back(inclusion_constant(g, *rho, weight, dir));
      r.measured[t + ".C_j" + std::to_string(j)] = C.back();
    }
    const double d = drift(C);
    r.measured[t + ".drift"] = d;
    ok = ok && d <= 10;
  }
  r.fixture = {{"domains", {"unit_disc", "slit_disc"}}, {"h", cfg.h}, {"green", "conformal closed form on the grid"},
               {"approach", "delta(w_j) = 2^-j, j = 2..6"}};
  r.bound = 10.0;
  r.tolerances = {{"max_drift", 10.0}};
  r.status = ok ? Status::Pass : Status::Fail;
}

void prop_2_6(FixtureSet& fx, VerifyReport& r) { inclusion(fx, r, InclusionDirection::Lower); }
void prop_5_1(FixtureSet& fx, VerifyReport& r) { inclusion(fx, r, InclusionDirection::Upper); }

void lem_3_1(FixtureSet& fx, VerifyReport& r) {
  const auto& cfg = fx.config();
  bool ok = true;
  for (const DomainSpec* s : {&disc(), &slit()}) {
    const std::string t = tag(*s);
    auto k = fx.kernel(*s);
    const cplx w = base_point(*s);
    std::vector<double> x, y;
    for (int j = 2; j <= 12; ++j) {
      const cplx z = approach(*s, j);
      x.push_back(std::log(s->distance_to_boundary(z)));
      y.push_back(std::log(std::abs(k->K(z, w))));
    }
    const double slope = least_squares(x, y).slope;
    const double a = fx.alpha(*s, cfg.h).value;
    r.measured[t + ".slope"] = slope;
    r.measured[t + ".alpha_hat"] = a;
    r.measured[t + ".bound"] = a - 1 - kSlopeSlack;
    ok = ok && slope >= a - 1 - kSlopeSlack;
  }
  r.fixture = {{"domains", {"unit_disc", "slit_disc"}}, {"approach", "delta(z_j) = 2^-j, j = 2..12"}};
  r.bound = "alpha_hat - 1";
  r.slack = {{"slope", kSlopeSlack}};
  r.status = ok ? Status::Pass : Status::Fail;
}

void lem_5_2(FixtureSet& fx, VerifyReport& r) {
  const auto& cfg = fx.config();
  const double eps = 0.05, slack = 5e-3;
  // n = 1: numeric Green functions
  const double h1 = 2 * cfg.h;
  auto g = fx.grid(disc(), h1);
  const cplx w(0.3, 0), zeta(-0.2, 0.1);
  GreenField gw = green_numeric(g, w, cfg.tol);
  GreenField gz = green_numeric(g, zeta, cfg.tol);
  double mn = kInf;
  for (std::size_t p = 0; p < g->size(); ++p)
    if (g->inside(p) && std::abs(g->center(p) - zeta) <= eps) mn = std::min(mn, std::abs(gw.field.values[p]));
  const double rhs1 = std::abs(gz.evaluate(w));
  r.measured["n1.lhs_min_abs_g"] = mn;
  r.measured["n1.rhs_abs_g"] = rhs1;
  const bool ok1 = mn <= rhs1 + slack;

  // n = 2: product closed form on the bidisc, R = diameter
  const DomainSpec bi = DomainSpec::product(disc(), disc());
  const Point2 w2{cplx(0.3, 0), cplx(0, -0.2)}, z2{cplx(-0.2, 0), cplx(0.4, 0)};
  Field2 gW = product_green(bi, w2), gZ = product_green(bi, z2);
  const double R = bi.diameter();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud;
  double mn2 = std::pow(std::abs(gW(z2)), 2);
  for (int s = 0; s < 20000; ++s) {
    double v[4], n2 = 0;
    for (double& c : v) c = nd(rng), n2 += c * c;
    const double rad = eps * std::pow(ud(rng), 0.25) / std::sqrt(n2);
    Point2 q{z2.z1 + rad * cplx(v[0], v[1]), z2.z2 + rad * cplx(v[2], v[3])};
    if (!bi.contains(q)) continue;
    mn2 = std::min(mn2, std::pow(std::abs(gW(q)), 2));
  }
  const double rhs2 = 2 * std::log(R / eps) * std::abs(gZ(w2));
  r.measured["n2.lhs_min_abs_g_sq"] = mn2;
  r.measured["n2.rhs"] = rhs2;
  const bool ok2 = mn2 <= rhs2;
  r.fixture = {{"n1", {{"domain", "unit_disc"}, {"h", h1}, {"w", {0.3, 0}}, {"zeta", {-0.2, 0.1}}}},
               {"n2", {{"domain", "unit_disc x unit_disc"}, {"R", R}, {"samples", 20000}}},
               {"eps", eps}};
  r.bound = "n! (log R/eps)^(n-1) |g(w, zeta)|";
  r.slack = {{"n1_abs", slack}};
  r.status = ok1 && ok2 ? Status::Pass : Status::Fail;
}

void thm_offdiag(FixtureSet& fx, VerifyReport& r) {
  const auto& cfg = fx.config();
  const int pairs = 1000;
  const double rad = 0.25;
  auto rho1 = [rad](cplx z) { return disc_extremal(z, rad); };
  auto m = conformal_model(disc());
  bool ok = true;
  for (int n : {1, 2}) {
    const std::string t = n == 1 ? "unit_disc" : "bidisc";
    std::vector<double> sups;
    for (double h : {2 * cfg.h, cfg.h}) {
      auto g = fx.grid(disc(), h);
      auto cells = masked_cells(*g);
      std::mt19937_64 rng(cfg.seed);
      std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
      double sup = 0;
      for (int k = 0; k < pairs; ++k) {
        double B = 1, rz = -1, rw = -1;
        for (int f = 0; f < n; ++f) {
          const cplx z = g->center(cells[pick(rng)]), w = g->center(cells[pick(rng)]);
          B *= m->normalized_kernel(z, w);
          rz = std::max(rz, rho1(z));
          rw = std::max(rw, rho1(w));
        }
        const double mm = std::min(nu_of(rz, n) / mu_of(rw), nu_of(rw, n) / mu_of(rz));
        if (mm > 0) sup = std::max(sup, B / std::pow(mm, kOffdiagPower));
      }
      sups.push_back(sup);
    }
    const double d = drift(sups);
    r.measured[t + ".sup_h"] = sups[0];
    r.measured[t + ".sup_h_half"] = sups[1];
    r.measured[t + ".drift"] = d;
    ok = ok && d <= 3;
  }
  r.fixture = {{"domains", {"unit_disc", "unit_disc x unit_disc"}}, {"pairs", pairs}, {"ball_radius", rad},
               {"spacings", {2 * cfg.h, cfg.h}}, {"power", kOffdiagPower}};
  r.bound = 3.0;
  r.tolerances = {{"max_drift", 3.0}};
  r.status = ok ? Status::Pass : Status::Fail;
}

struct Geo {
  GeodesicField bergman, kobayashi;
};

Geo geodesics(FixtureSet& fx, const DomainSpec& s) {
  auto m = conformal_model(s);
  auto g = fx.grid(s, fx.config().h);
  return {bergman_geodesics(g, base_point(s), [m](cplx z) { return m->metric(z); }),
          kobayashi_geodesics(g, base_point(s))};
}

void cor_1_4(FixtureSet& fx, VerifyReport& r) {
  const auto& cfg = fx.config();
  bool ok = true;
  for (const DomainSpec* s : {&disc(), &slit()}) {
    const std::string t = tag(*s);
    auto m = conformal_model(*s);
    Geo geo = geodesics(fx, *s);
    std::vector<double> c;
    for (int j = 2; j <= 7; ++j) {
      const cplx z = approach(*s, j);
      const double L = std::abs(std::log(s->distance_to_boundary(z)));
      c.push_back(geo.bergman.to(z) * std::log(L) / L);
      r.measured[t + ".c_j" + std::to_string(j)] = c.back();
    }
    const double mn = *std::min_element(c.begin(), c.end());
    r.measured[t + ".min_c"] = mn;
    ok = ok && mn > 0 && c.back() >= c.front() / 5;
    // d_B >= sqrt(2) d_S on sampled pairs (z0, z)
    auto cells = masked_cells(*geo.bergman.grid);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
    double margin = kInf;
    const cplx z0 = base_point(*s);
    for (int k = 0; k < 1000; ++k) {
      const std::size_t p = cells[pick(rng)];
      const double dB = geo.bergman.dist[p];
      if (!std::isfinite(dB)) continue;
      const double B = std::min(1.0, m->normalized_kernel(z0, geo.bergman.grid->center(p)));
      margin = std::min(margin, dB - std::sqrt(2.0) * std::sqrt(std::max(0.0, 1 - std::sqrt(B))));
    }
    r.measured[t + ".dB_minus_sqrt2_dS_min"] = margin;
    ok = ok && margin >= -0.02;
  }
  r.fixture = {{"domains", {"unit_disc", "slit_disc"}}, {"h", cfg.h}, {"metric", "conformal closed form"},
               {"approach", "delta(z_j) = 2^-j, j = 2..7"}, {"pairs", 1000}};
  r.bound = "c_j > 0, c_last >= c_first/5; d_B - sqrt(2) d_S >= -0.02";
  r.slack = {{"sqrt2_dS", 0.02}};
  r.status = ok ? Status::Pass : Status::Fail;
}

void cor_1_5(FixtureSet& fx, VerifyReport& r) {
  bool ok = true;
  for (const DomainSpec* s : {&disc(), &slit()}) {
    const std::string t = tag(*s);
    auto m = conformal_model(*s);
    Geo geo = geodesics(fx, *s);
    double c = kInf;
    for (int j = 2; j <= 7; ++j) {
      const cplx z = approach(*s, j);
      const double DB = -std::log(m->normalized_kernel(base_point(*s), z));
      const double dK = geo.kobayashi.to(z);
      r.measured[t + ".D_B_j" + std::to_string(j)] = DB;
      r.measured[t + ".d_K_upper_j" + std::to_string(j)] = dK;
      c = std::min(c, DB / dK);
    }
    r.measured[t + ".c"] = c;
    ok = ok && c > 0 && std::isfinite(c);
  }
  r.fixture = {{"domains", {"unit_disc", "slit_disc"}}, {"h", fx.config().h},
               {"approach", "delta(z_j) = 2^-j, j = 2..7"}};
  r.bound = "c > 0";
  r.note = "d_K_upper bounds d_K from above, so a pass is evidence, not proof";
  r.status = ok ? Status::Pass : Status::Fail;
}

void lem_6_1(FixtureSet& fx, VerifyReport& r) {
  const auto& cfg = fx.config();
  const double a1 = 2, a2 = 4;
  const DomainSpec spec = DomainSpec::reinhardt(a1, a2);
  ReinhardtBasis b = reinhardt_gram(a1, a2, std::min(cfg.N, 30));
  const Point2 zero{0, 0};
  const double K0 = b.K(zero, zero).real();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst = 0;
  int n = 0;
  while (n < 50) {
    Point2 z{cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
    if (!spec.contains(z)) continue;
    worst = std::max(worst, std::abs(b.K(z, zero) - K0) / K0);
    ++n;
  }
  const double exact = 1 / reinhardt_norm2_exact(a1, a2, 0, 0);
  r.measured["max_rel_dev"] = worst;
  r.measured["K0"] = K0;
  r.measured["K0_rel_err_vs_volume"] = std::abs(K0 - exact) / exact;
  r.fixture = {{"domain", spec.to_json()}, {"N", b.N}, {"samples", 50}};
  r.bound = 1e-6;
  r.tolerances = {{"rel", 1e-6}};
  r.status = worst <= 1e-6 && std::abs(K0 - exact) / exact <= 1e-6 ? Status::Pass : Status::Fail;
}

void prop_7_2(FixtureSet& fx, VerifyReport& r) {
  const auto& cfg = fx.config();
  const double as = fx.alpha(slit(), cfg.h).value;
  const double ad = fx.alpha(disc(), cfg.h).value;
  const double aq = fx.alpha(square(), cfg.h).value;
  r.measured["slit_disc.alpha_hat"] = as;
  r.measured["unit_disc.alpha_hat"] = ad;
  r.measured["square.alpha_hat"] = aq;
  r.fixture = {{"domains", {"slit_disc", "unit_disc", "square"}}, {"h", cfg.h}};
  r.bound = {{"slit_disc", 0.42}, {"convex", 0.9}};
  r.tolerances = {{"discretization_allowance", 0.08}};
  r.status = as >= 0.42 && ad >= 0.9 && aq >= 0.9 ? Status::Pass : Status::Fail;
}

void repro_4(FixtureSet& fx, VerifyReport& r) {
  const auto& cfg = fx.config();
  auto b = fx.basis(disc(), cfg.N);
  auto q = fx.fitted(disc());
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<cplx> pts;
  for (int k = 0; k < 20; ++k) pts.push_back(std::polar(0.8 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng)));
  double proj = 0;
  for (int k = 0; k <= 10; ++k) {
    std::vector<cplx> f;
    for (const auto& n : q->nodes) f.push_back(std::pow(n.z, k));
    Projection P = projection(*b, f, *q);
    for (cplx z : pts) proj = std::max(proj, std::abs(P(z) - std::pow(z, k)) / std::max(std::abs(std::pow(z, k)), 1e-300));
  }
  std::vector<cplx> one(q->size(), 1.0), zz, zbar;
  for (const auto& n : q->nodes) zz.push_back(n.z), zbar.push_back(std::conj(n.z));
  Projection Pbar = projection(*b, zbar, *q);
  double anti = 0;
  for (cplx z : pts) anti = std::max(anti, std::abs(Pbar(z)));
  double t1 = 0, tz = 0;
  for (cplx z0 : {cplx(0), cplx(0.3, 0), cplx(0, 0.5)}) {
    t1 = std::max(t1, std::abs(berezin(*b, one, z0, *q) - 1.0));
    tz = std::max(tz, std::abs(berezin(*b, zz, z0, *q) - z0));
  }
  r.measured["projection_rel_err"] = proj;
  r.measured["projection_conj_z_abs"] = anti;
  r.measured["berezin_one_abs_err"] = t1;
  r.measured["berezin_z_abs_err"] = tz;
  r.fixture = {{"domain", "unit_disc"}, {"N", cfg.N}, {"kernel", "gram"}, {"rule", q->fingerprint}};
  r.bound = 0.0;
  r.tolerances = {{"projection_rel", 1e-6}, {"conj_z_abs", 1e-6}, {"berezin_abs", 1e-4}};
  r.status = proj <= 1e-6 && anti <= 1e-6 && t1 <= 1e-4 && tz <= 1e-4 ? Status::Pass : Status::Fail;
}

void prop_planar(FixtureSet& fx, VerifyReport& r) {
  const auto& cfg = fx.config();
  const double dim_half = moran_dimension({0.25, 0.25});
  const double b_half = beta_upper_planar(dim_half);
  const double b_zero = beta_upper_planar(0.0);
  FeketeOptions opt;
  opt.seed = cfg.seed;
  opt.restarts = 4;
  opt.jobs = 1;
  std::vector<double> caps;
  for (int L : {3, 4}) {
    CantorLinear c;
    c.lambda = 0.25;
    c.levels = L;
    caps.push_back(capacity_estimate(CompactSetSpec(c), 32, opt).value);
    r.measured["cantor_quarter.capacity_L" + std::to_string(L)] = caps.back();
  }
  r.measured["cantor_quarter.dim"] = dim_half;
  r.measured["beta_upper.dim_half"] = b_half;
  r.measured["beta_upper.dim_zero"] = b_zero;
  r.fixture = {{"set", "two-piece Cantor set, ratio 1/4"}, {"levels", {3, 4}}, {"n_points", 32}};
  r.bound = 3.0;
  r.tolerances = {{"abs", 1e-12}};
  const bool ok = std::abs(b_half - 3) <= 1e-12 && b_zero == 2 && caps[0] > 0 && caps[1] > 0;
  r.status = ok ? Status::Pass : Status::Fail;
}

const std::vector<CheckDef>& registry() {
  static const std::vector<CheckDef> defs = {
      {"THM_MAIN_BETA", "beta >= 2 + 2 alpha/(2n - alpha)", thm_main_beta},
      {"EQ_1_1", "int |K(.,w)/sqrt K(w)|^p <= C |mu(w)|^(-(p-2)n/alpha)", eq_1_1},
      {"THM_1D_BETA", "n = 1: beta >= 2 + alpha/(1 - alpha)", thm_1d_beta},
      {"PROP_PLANAR", "beta(C \\ E) <= 2 + dim_H(E)/(1 - dim_H(E))", prop_planar},
      {"COR_KP", "K_p(z) >= C sqrt K(z) |mu(z)|^((p-2)n/(p alpha))", cor_kp},
      {"PROP_2_1", "int_{-rho <= eps} |K(.,w)|^2 <= C_r K(w) eps^r", prop_2_1},
      {"PROP_2_5", "int_{-rho <= eps} |K(.,w)|^2 / K(w) <= C_r (eps/mu(w))^r", prop_2_5},
      {"LEM_2_4", "rho(z2) >= r rho(z1) - C |z1 - z2|^alpha", lem_2_4},
      {"PROP_2_6", "{g(.,w) < -1} inside {rho < -mu(w)/C}", prop_2_6},
      {"PROP_5_1", "{g(.,w) < -1} inside {rho > -C nu(w)}", prop_5_1},
      {"LEM_3_1", "|K(z,w)| <= C delta(z)^(alpha - 1)", lem_3_1},
      {"LEM_5_2", "|g(zeta',w)|^n <= n! (log R/eps)^(n-1) |g(w,zeta)|", lem_5_2},
      {"THM_OFFDIAG", "B(z,w) <= C min(nu(z)/mu(w), nu(w)/mu(z))^gamma", thm_offdiag},
      {"COR_1_4", "d_B(z0,z) >= C |log delta(z)| / log|log delta(z)|", cor_1_4},
      {"COR_1_5", "D_B(z0,z) >= C d_K(z0,z)", cor_1_5},
      {"LEM_6_1", "Reinhardt: K(z,0) = K(0,0)", lem_6_1},
      {"PROP_7_2", "bounded C-convex: alpha >= 1/2", prop_7_2},
      {"REPRO_4", "P(f) = f and T(f) = f for holomorphic f", repro_4},
  };
  return defs;
}

}  // namespace

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    default: return "inconclusive";
  }
}

json VerifyReport::to_json(bool timings) const {
  json m = json::object();
  for (const auto& [k, v] : measured) m[k] = num(v);
  json j = {{"check_id", check_id}, {"statement", statement}, {"fixture", fixture}, {"measured", m},
            {"bound", bound},       {"slack", slack},         {"tolerances", tolerances},
            {"status", status_name(status)}, {"seed", seed},  {"config", config}};
  if (!note.empty()) j["note"] = note;
  if (timings) j["runtime_s"] = runtime_s;
  return j;
}

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& d : registry()) v.push_back(d.id);
    return v;
  }();
  return ids;
}

VerifyReport verify(const std::string& check_id, FixtureSet& fx) {
  for (const auto& d : registry()) {
    if (d.id != check_id) continue;
    VerifyReport r;
    r.check_id = d.id;
    r.statement = d.statement;
    r.seed = fx.config().seed;
    r.config = fx.config().to_json();
    const auto t0 = std::chrono::steady_clock::now();
    d.run(fx, r);
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
  throw Error(Errc::FixtureUnavailable, "unknown check '" + check_id + "'");
}

std::vector<VerifyReport> verify_many(const std::vector<std::string>& ids, FixtureSet& fx, int jobs) {
  if (jobs <= 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<VerifyReport> out(ids.size());
  std::vector<std::exception_ptr> errs(ids.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < ids.size();) {
      try {
        out[i] = verify(ids[i], fx);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> th;
  for (int t = 1; t < std::min<int>(jobs, ids.size()); ++t) th.emplace_back(worker);
  worker();
  for (auto& t : th) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace blab
