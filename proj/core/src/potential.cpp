#include "blab/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "blab/conformal.hpp"
#include "blab/error.hpp"

namespace blab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint32_t kRegular = std::numeric_limits<std::uint32_t>::max();

struct Irregular {
  std::array<std::int64_t, 4> nbr;
  std::array<double, 4> c;
  double inv_diag;
  double rhs;
};

struct System {
  std::vector<std::uint32_t> free;
  std::vector<std::uint32_t> irr;
  std::vector<Irregular> irregular;
};

std::optional<double> ball_crossing(cplx a, cplx b, const BallSpec& ball) {
  cplx d = b - a, p = a - ball.center;
  double A = std::norm(d), B = 2 * (p.real() * d.real() + p.imag() * d.imag());
  double C = std::norm(p) - ball.radius * ball.radius;
  double disc = B * B - 4 * A * C;
  if (disc < 0) return std::nullopt;
  double s = std::sqrt(disc);
  double t0 = (-B - s) / (2 * A), t1 = (-B + s) / (2 * A);
  for (double t : {t0, t1})
    if (t > 1e-12 && t <= 1 + 1e-9) return std::min(t, 1.0);
  return std::nullopt;
}

// Shortley-Weller five-point system on masked, non-fixed cells.
System assemble(const GridDomain& g, const std::vector<std::uint8_t>& fixed, const std::optional<BallSpec>& ball,
                const std::function<double(cplx)>& boundary_value) {
  System s;
  const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
  // red-black order: updates within a color are independent
  for (int color = 0; color < 2; ++color)
  for (int j = 0; j < g.ny; ++j)
    for (int i = (j + color) % 2; i < g.nx; i += 2) {
      std::size_t p = g.index(i, j);
      if (!g.inside(p) || fixed[p]) continue;
      cplx zc = g.center(i, j);
      bool near = g.delta[p] < 1.01 * g.h;
      std::array<double, 4> theta{};
      std::array<std::int64_t, 4> nbr{};
      std::array<double, 4> val{};
      bool regular = true;
      for (int a = 0; a < 4; ++a) {
        int ii = i + di[a], jj = j + dj[a];
        bool inb = ii >= 0 && jj >= 0 && ii < g.nx && jj < g.ny;
        std::size_t q = inb ? g.index(ii, jj) : 0;
        cplx zn = g.center(ii, jj);
        theta[a] = 1;
        nbr[a] = -1;
        if (inb && g.inside(q) && !fixed[q]) {
          auto t = near ? g.spec.first_crossing(zc, zn) : std::nullopt;
          if (!t || *t >= 1) {
            nbr[a] = static_cast<std::int64_t>(q);
            continue;
          }
          theta[a] = *t;
          val[a] = boundary_value(zc + *t * (zn - zc));
        } else if (inb && g.inside(q) && fixed[q]) {
          auto t = ball ? ball_crossing(zc, zn, *ball) : std::nullopt;
          theta[a] = t ? *t : 1.0;
          val[a] = -1.0;
        } else {
          auto t = g.spec.first_crossing(zc, zn);
          theta[a] = t ? *t : 1.0;
          val[a] = boundary_value(zc + theta[a] * (zn - zc));
        }
        regular = false;
      }
      s.free.push_back(static_cast<std::uint32_t>(p));
      if (regular) {
        s.irr.push_back(kRegular);
        continue;
      }
      Irregular r{};
      double tE = theta[0], tW = theta[1], tN = theta[2], tS = theta[3];
      r.c = {1 / (tE * (tE + tW)), 1 / (tW * (tE + tW)), 1 / (tN * (tN + tS)), 1 / (tS * (tN + tS))};
      double diag = 1 / (tE * tW) + 1 / (tN * tS);
      r.inv_diag = 1 / diag;
      r.rhs = 0;
      for (int a = 0; a < 4; ++a) {
        r.nbr[a] = nbr[a];
        if (nbr[a] < 0) r.rhs += r.c[a] * val[a];
      }
      s.irr.push_back(static_cast<std::uint32_t>(s.irregular.size()));
      s.irregular.push_back(r);
    }
  return s;
}

double optimal_omega(const GridDomain& g) {
  double L = std::max(g.nx, g.ny) * g.h;
  return 2 / (1 + std::sin(kPi * g.h / L));
}

// projected SOR; project caps free values at 0 (the obstacle from above)
void sor(const GridDomain& g, const System& s, std::vector<double>& u, const SolverOptions& opt, bool project,
         SolveStats* stats) {
  const double omega = opt.omega > 0 ? opt.omega : optimal_omega(g);
  const std::size_t nx = static_cast<std::size_t>(g.nx);
  long sweep = 0;
  double maxd = 0;
  for (; sweep < opt.max_sweeps; ++sweep) {
    maxd = 0;
    for (std::size_t k = 0; k < s.free.size(); ++k) {
      const std::size_t p = s.free[k];
      double gs;
      if (s.irr[k] == kRegular) {
        gs = 0.25 * (u[p - 1] + u[p + 1] + u[p - nx] + u[p + nx]);
      } else {
        const Irregular& r = s.irregular[s.irr[k]];
        double acc = r.rhs;
        for (int a = 0; a < 4; ++a)
          if (r.nbr[a] >= 0) acc += r.c[a] * u[static_cast<std::size_t>(r.nbr[a])];
        gs = acc * r.inv_diag;
      }
      double nu = u[p] + omega * (gs - u[p]);
      if (project && nu > 0) nu = 0;
      maxd = std::max(maxd, std::abs(nu - u[p]));
      u[p] = nu;
    }
    if (maxd < opt.tol) break;
  }
  if (stats) *stats = SolveStats{sweep + 1, maxd, omega};
  if (maxd >= opt.tol)
    throw Error(Errc::NoConvergence, "no convergence after " + std::to_string(opt.max_sweeps) + " sweeps");
}

double lagrange4(int k, double t) {
  switch (k) {
    case 0: return -t * (t - 1) * (t - 2) / 6;
    case 1: return (t + 1) * (t - 1) * (t - 2) / 2;
    case 2: return -(t + 1) * t * (t - 2) / 2;
    default: return (t + 1) * t * (t - 1) / 6;
  }
}

struct Locator {
  int i0, j0;
  double tx, ty;
};

Locator locate(const GridDomain& g, cplx z) {
  cplx c0 = g.center(0, 0);
  double fx = (z.real() - c0.real()) / g.h, fy = (z.imag() - c0.imag()) / g.h;
  int i0 = static_cast<int>(std::floor(fx)), j0 = static_cast<int>(std::floor(fy));
  return {i0, j0, fx - i0, fy - j0};
}

bool cell_ok(const GridDomain& g, int i, int j) {
  return i >= 0 && j >= 0 && i < g.nx && j < g.ny && g.inside(g.index(i, j));
}

// interpolate masked data; order 4 (bicubic), then bilinear, then nearest masked cell
double interpolate(const GridDomain& g, const std::vector<double>& v, cplx z, bool allow_cubic) {
  Locator L = locate(g, z);
  if (allow_cubic) {
    bool ok = true;
    for (int b = -1; b <= 2 && ok; ++b)
      for (int a = -1; a <= 2 && ok; ++a) ok = cell_ok(g, L.i0 + a, L.j0 + b) && std::isfinite(v[g.index(L.i0 + a, L.j0 + b)]);
    if (ok) {
      double s = 0;
      for (int b = 0; b < 4; ++b) {
        double row = 0;
        for (int a = 0; a < 4; ++a) row += lagrange4(a, L.tx) * v[g.index(L.i0 + a - 1, L.j0 + b - 1)];
        s += lagrange4(b, L.ty) * row;
      }
      return s;
    }
  }
  double acc = 0, wsum = 0;
  for (int b = 0; b <= 1; ++b)
    for (int a = 0; a <= 1; ++a) {
      if (!cell_ok(g, L.i0 + a, L.j0 + b)) continue;
      double x = v[g.index(L.i0 + a, L.j0 + b)];
      if (!std::isfinite(x)) continue;
      double w = (a ? L.tx : 1 - L.tx) * (b ? L.ty : 1 - L.ty);
      acc += w * x;
      wsum += w;
    }
  if (wsum > 1e-9) return acc / wsum;
  // nearest masked finite cell within a few cells
  double best = std::numeric_limits<double>::infinity(), val = kNaN;
  int ic = static_cast<int>(std::lround(L.i0 + L.tx)), jc = static_cast<int>(std::lround(L.j0 + L.ty));
  for (int b = -3; b <= 3; ++b)
    for (int a = -3; a <= 3; ++a) {
      if (!cell_ok(g, ic + a, jc + b)) continue;
      double x = v[g.index(ic + a, jc + b)];
      if (!std::isfinite(x)) continue;
      double d = std::abs(g.center(ic + a, jc + b) - z);
      if (d < best) best = d, val = x;
    }
  return val;
}

}  // namespace

const char* field_kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::Extremal: return "extremal";
    case FieldKind::Green: return "green";
    case FieldKind::Mu: return "mu";
    case FieldKind::Nu: return "nu";
    case FieldKind::Metric: return "metric";
    case FieldKind::Generic: return "generic";
  }
  return "generic";
}

FieldKind field_kind_from(const std::string& s) {
  for (auto k : {FieldKind::Extremal, FieldKind::Green, FieldKind::Mu, FieldKind::Nu, FieldKind::Metric, FieldKind::Generic})
    if (s == field_kind_name(k)) return k;
  throw Error(Errc::InvalidSpec, "unknown field kind " + s);
}

std::optional<double> ScalarField::bilinear(cplx z) const {
  const GridDomain& g = *grid;
  Locator L = locate(g, z);
  double acc = 0;
  for (int b = 0; b <= 1; ++b)
    for (int a = 0; a <= 1; ++a) {
      if (!cell_ok(g, L.i0 + a, L.j0 + b)) return std::nullopt;
      double x = values[g.index(L.i0 + a, L.j0 + b)];
      if (!std::isfinite(x)) return std::nullopt;
      acc += (a ? L.tx : 1 - L.tx) * (b ? L.ty : 1 - L.ty) * x;
    }
  return acc;
}

json BallSpec::to_json() const { return {{"center", {center.real(), center.imag()}}, {"radius", radius}}; }

BallSpec BallSpec::from_json(const json& j) {
  try {
    return {cplx(j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>()), j.at("radius").get<double>()};
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidSpec, std::string("bad ball: ") + e.what());
  }
}

BallSpec default_ball(const GridDomain& g) {
  cplx c = g.spec.centroid();
  if (g.spec.contains(c)) return {c, g.spec.boundary_distance_raw(c) / 4};
  // centroid in a hole (annulus): deepest cell center, lowest index on ties
  std::size_t best = g.size();
  for (std::size_t p = 0; p < g.size(); ++p)
    if (g.inside(p) && (best == g.size() || g.delta[p] > g.delta[best])) best = p;
  if (best == g.size()) return {c, 0.0};
  return {g.center(best), g.delta[best] / 4};
}

ScalarField extremal_numeric(std::shared_ptr<const GridDomain> grid, const BallSpec& ball, double tol,
                             SolveStats* stats) {
  SolverOptions opt;
  opt.tol = tol;
  return extremal_numeric(std::move(grid), ball, opt, stats);
}

ScalarField extremal_numeric(std::shared_ptr<const GridDomain> grid, const BallSpec& ball, const SolverOptions& opt,
                             SolveStats* stats) {
  const GridDomain& g = *grid;
  if (!(opt.tol > 0)) throw Error(Errc::InvalidSpec, "tol must be positive");
  if (!(ball.radius > 0) || !g.spec.contains(ball.center) ||
      g.spec.boundary_distance_raw(ball.center) - ball.radius < 2 * g.h)
    throw Error(Errc::BallTooCloseToBoundary, "closed ball needs a margin of 2h inside the domain");
  std::vector<std::uint8_t> fixed(g.size(), 0);
  std::vector<double> u(g.size(), 0.0);
  for (std::size_t p = 0; p < g.size(); ++p)
    if (g.inside(p) && std::abs(g.center(p) - ball.center) <= ball.radius) fixed[p] = 1, u[p] = -1;
  System s = assemble(g, fixed, ball, [](cplx) { return 0.0; });
  sor(g, s, u, opt, true, stats);
  ScalarField f{grid, std::vector<double>(g.size(), kNaN), FieldKind::Extremal, opt.tol, {{"ball", ball.to_json()}}};
  for (std::size_t p = 0; p < g.size(); ++p)
    if (g.inside(p)) f.values[p] = std::clamp(u[p], -1.0, 0.0);
  return f;
}

GreenField green_numeric(std::shared_ptr<const GridDomain> grid, cplx w, double tol, SolveStats* stats) {
  SolverOptions opt;
  opt.tol = tol;
  return green_numeric(std::move(grid), w, opt, stats);
}

GreenField green_numeric(std::shared_ptr<const GridDomain> grid, cplx w, const SolverOptions& opt,
                         SolveStats* stats) {
  const GridDomain& g = *grid;
  if (!(opt.tol > 0)) throw Error(Errc::InvalidSpec, "tol must be positive");
  if (!g.spec.contains(w) || g.spec.boundary_distance_raw(w) < 4 * g.h)
    throw Error(Errc::PoleTooCloseToBoundary, "pole needs delta(w) >= 4h");
  std::vector<std::uint8_t> fixed(g.size(), 0);
  std::vector<double> c(g.size(), 0.0);
  System s = assemble(g, fixed, std::nullopt, [w](cplx zb) { return -std::log(std::abs(zb - w)); });
  sor(g, s, c, opt, false, stats);
  GreenField out;
  out.pole = w;
  out.regular.assign(g.size(), kNaN);
  out.field = ScalarField{grid, std::vector<double>(g.size(), kNaN), FieldKind::Green, opt.tol,
                          {{"pole", {w.real(), w.imag()}}}};
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!g.inside(p)) continue;
    out.regular[p] = c[p];
    double r = std::abs(g.center(p) - w);
    out.field.values[p] = r > 0 ? std::log(r) + c[p] : -std::numeric_limits<double>::infinity();
  }
  if (auto pc = g.cell_of(w); pc && g.inside(*pc))
    out.field.values[*pc] = -std::numeric_limits<double>::infinity();
  return out;
}

double GreenField::regular_at(cplx z) const { return interpolate(*field.grid, regular, z, true); }

double GreenField::evaluate(cplx z) const {
  double r = std::abs(z - pole);
  if (r == 0) return -std::numeric_limits<double>::infinity();
  return std::log(r) + regular_at(z);
}

ScalarField sample_field(std::shared_ptr<const GridDomain> grid, const std::function<double(cplx)>& f,
                         FieldKind kind) {
  ScalarField out{grid, std::vector<double>(grid->size(), kNaN), kind, 0, json::object()};
  for (std::size_t p = 0; p < grid->size(); ++p)
    if (grid->inside(p)) out.values[p] = f(grid->center(p));
  return out;
}

Field2 product_green(const DomainSpec& product, const Point2& pole) {
  const auto* p = std::get_if<Product>(&product.variant());
  if (!p) throw Error(Errc::UnsupportedFactor, "product_green needs a product domain");
  auto m1 = conformal_model(*p->left), m2 = conformal_model(*p->right);
  if (!m1 || !m2) throw Error(Errc::UnsupportedFactor, "factor has no closed-form Green function");
  return [m1, m2, pole](const Point2& z) { return std::max(m1->green(z.z1, pole.z1), m2->green(z.z2, pole.z2)); };
}

Field2 product_extremal(std::function<double(cplx)> rho1, std::function<double(cplx)> rho2) {
  return [rho1 = std::move(rho1), rho2 = std::move(rho2)](const Point2& z) { return std::max(rho1(z.z1), rho2(z.z2)); };
}

double disc_extremal(cplx z, double r) {
  double a = std::abs(z);
  if (a <= r) return -1.0;
  return std::min(0.0, std::log(a) / -std::log(r));
}

double mu_of(double rho) {
  double a = std::abs(rho);
  return a == 0 ? 0.0 : a / (1 + std::abs(std::log(a)));
}

double nu_of(double rho, int n) {
  double a = std::abs(rho);
  return a == 0 ? 0.0 : a * std::pow(1 + std::abs(std::log(a)), n);
}

MuNu mu_nu(const ScalarField& rho, int n) {
  if (n < 1) throw Error(Errc::InvalidSpec, "n must be at least 1");
  MuNu out{ScalarField{rho.grid, rho.values, FieldKind::Mu, rho.tol, rho.meta},
           ScalarField{rho.grid, rho.values, FieldKind::Nu, rho.tol, rho.meta}};
  for (std::size_t p = 0; p < rho.values.size(); ++p) {
    if (!std::isfinite(rho.values[p])) continue;
    out.mu.values[p] = mu_of(rho.values[p]);
    out.nu.values[p] = nu_of(rho.values[p], n);
  }
  return out;
}

double inclusion_constant(const ScalarField& g, const ScalarField& rho, double weight, InclusionDirection dir) {
  if (g.grid->fingerprint() != rho.grid->fingerprint())
    throw Error(Errc::InvalidSpec, "fields live on different grids");
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  bool any = false;
  for (std::size_t p = 0; p < g.values.size(); ++p) {
    if (!g.grid->inside(p) || !(g.values[p] < -1)) continue;
    double a = std::abs(rho.values[p]);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
    any = true;
  }
  if (!any) throw Error(Errc::EmptySublevel, "no cell with g < -1");
  if (dir == InclusionDirection::Lower) return lo > 0 ? weight / lo : std::numeric_limits<double>::infinity();
  return hi / weight;
}

double quasi_holder_fit(const ScalarField& rho, double r, double alpha, int samples, std::uint64_t seed) {
  const GridDomain& g = *rho.grid;
  if (!(alpha > 0 && alpha <= 1) || !(r > 1)) throw Error(Errc::InvalidSpec, "need 0 < alpha <= 1 and r > 1");
  std::vector<std::size_t> cells;
  for (std::size_t p = 0; p < g.size(); ++p)
    if (g.inside(p)) cells.push_back(p);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lmin = std::log(g.h), lspan = std::log(g.spec.diameter()) - lmin;
  double best = 0;
  for (int s = 0; s < samples; ++s) {
    std::size_t a = cells[pick(rng)];
    // offsets log-uniform in [h, diam] so every scale down to the grid is probed
    double rad = std::exp(lmin + lspan * unit(rng)), ang = 2 * kPi * unit(rng);
    auto b = g.cell_of(g.center(a) + std::polar(rad, ang));
    if (!b || !g.inside(*b) || *b == a) continue;
    double d = std::abs(g.center(a) - g.center(*b));
    best = std::max(best, (r * rho.values[a] - rho.values[*b]) / std::pow(d, alpha));
  }
  return best;
}

RatioInterpolant::RatioInterpolant(const ScalarField& f, std::function<double(cplx)> templ)
    : f_(&f), templ_(std::move(templ)), ratio_(f.values.size(), kNaN) {
  const GridDomain& g = *f.grid;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!g.inside(p)) continue;
    double t = templ_(g.center(p));
    if (t != 0 && std::isfinite(t) && std::isfinite(f.values[p])) ratio_[p] = f.values[p] / t;
  }
  if (f.kind == FieldKind::Extremal && f.meta.contains("ball")) ball_ = BallSpec::from_json(f.meta["ball"]);
}

double RatioInterpolant::operator()(cplx z) const {
  double v = interpolate(*f_->grid, ratio_, z, false) * templ_(z);
  if (f_->kind == FieldKind::Extremal) {
    if (ball_ && std::abs(z - ball_->center) <= ball_->radius) return -1.0;
    v = std::clamp(v, -1.0, 0.0);
  }
  return v;
}

SchifferKernel::SchifferKernel(std::shared_ptr<const GridDomain> grid, cplx w, double tol)
    : grid_(std::move(grid)), w_(w) {
  const GridDomain& g = *grid_;
  if (!g.spec.contains(w) || g.spec.boundary_distance_raw(w) < 8 * g.h)
    throw Error(Errc::PoleTooCloseToBoundary, "Schiffer kernel needs delta(w) >= 8h");
  const double h = g.h;
  for (cplx d : {cplx(h, 0), cplx(-h, 0), cplx(0, h), cplx(0, -h)}) g_.push_back(green_numeric(grid_, w + d, tol));
}

cplx SchifferKernel::operator()(cplx z) const {
  const GridDomain& g = *grid_;
  const double h = g.h;
  const cplx steps[4] = {cplx(h, 0), cplx(-h, 0), cplx(0, h), cplx(0, -h)};
  for (cplx d : steps) {
    auto c = g.cell_of(z + d);
    if (!g.spec.contains(z + d) || !c || !g.inside(*c) || g.spec.boundary_distance_raw(z + d) < 2 * h)
      throw Error(Errc::StencilOutsideDomain, "difference stencil leaves the domain");
  }
  // D[k] = d/dz of the regular part for pole k
  cplx D[4];
  for (int k = 0; k < 4; ++k) {
    const GreenField& G = g_[k];
    double dx = (G.regular_at(z + steps[0]) - G.regular_at(z + steps[1])) / (2 * h);
    double dy = (G.regular_at(z + steps[2]) - G.regular_at(z + steps[3])) / (2 * h);
    D[k] = 0.5 * cplx(dx, -dy);
  }
  cplx dwbar = 0.5 * ((D[0] - D[1]) / (2 * h) + cplx(0, 1) * (D[2] - D[3]) / (2 * h));
  return 2.0 / kPi * dwbar;
}

SchifferKernel schiffer_kernel(std::shared_ptr<const GridDomain> grid, cplx w, double tol) {
  return SchifferKernel(std::move(grid), w, tol);
}

}  // namespace blab
