#include "blab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "blab/error.hpp"
#include "blab/hash.hpp"
#include "blab/io.hpp"

namespace blab {

namespace {

constexpr double kPi = std::numbers::pi;

void gauss_panel(double a, double b, Rule1D& r) {
  using G = boost::math::quadrature::gauss<double, 20>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  double c = 0.5 * (a + b), s = 0.5 * (b - a);
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.x.push_back(c - s * x[i]);
    r.w.push_back(s * w[i]);
    r.x.push_back(c + s * x[i]);
    r.w.push_back(s * w[i]);
  }
}

}  // namespace

Rule1D graded_rule(double a, double b, bool lo, bool hi, int levels, int coarse) {
  std::vector<double> br;
  double L = b - a;
  if (lo && hi) {
    // split at the middle and grade each half toward its end
    Rule1D left = graded_rule(a, a + 0.5 * L, true, false, levels, std::max(1, coarse / 2));
    Rule1D right = graded_rule(a + 0.5 * L, b, false, true, levels, std::max(1, coarse / 2));
    left.x.insert(left.x.end(), right.x.begin(), right.x.end());
    left.w.insert(left.w.end(), right.w.begin(), right.w.end());
    return left;
  }
  Rule1D r;
  if (!lo && !hi) {
    for (int i = 0; i < coarse; ++i) gauss_panel(a + L * i / coarse, a + L * (i + 1) / coarse, r);
    return r;
  }
  // breakpoints measured from the singular end: L, L/2, L/4, ..., L 2^-levels, 0
  std::vector<double> d;
  for (int i = 0; i < coarse; ++i) d.push_back(L * (1.0 - 0.5 * i / coarse));
  for (int k = 1; k <= levels; ++k) d.push_back(L * std::ldexp(1.0, -k));
  d.push_back(0.0);
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    if (hi) gauss_panel(b - d[i], b - d[i + 1], r);
    else gauss_panel(a + d[i + 1], a + d[i], r);
  }
  return r;
}

double QuadratureRule::total_weight() const {
  double s = 0;
  for (const auto& n : nodes) s += n.w;
  return s;
}

QuadratureRule build_quadrature(const GridDomain& g, int depth) {
  if (depth < 0 || depth > 6) throw Error(Errc::InvalidSpec, "boundary_depth must lie in [0,6]");
  QuadratureRule q;
  q.kind = "grid";
  q.boundary_depth = depth;
  q.fingerprint = hex64(fnv1a64(g.fingerprint() + "|grid|" + std::to_string(depth)));
  const double h = g.h;
  const int m = 1 << depth;
  const double hs = h / m;
  auto near_mask = [&](int i, int j) {
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        int a = i + di, b = j + dj;
        if (a >= 0 && b >= 0 && a < g.nx && b < g.ny && g.inside(g.index(a, b))) return true;
      }
    return false;
  };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      std::size_t k = g.index(i, j);
      bool in = g.inside(k);
      bool layer = in ? g.delta[k] <= 2 * h : (depth > 0 && near_mask(i, j));
      cplx c = g.center(i, j);
      if (in && (!layer || depth == 0)) {
        q.nodes.push_back({c, h * h, g.delta[k], static_cast<std::ptrdiff_t>(k)});
        continue;
      }
      if (!layer) continue;
      for (int b = 0; b < m; ++b)
        for (int a = 0; a < m; ++a) {
          cplx z = c + cplx((a + 0.5) * hs - 0.5 * h, (b + 0.5) * hs - 0.5 * h);
          if (!g.spec.contains(z)) continue;
          q.nodes.push_back({z, hs * hs, g.spec.boundary_distance_raw(z), static_cast<std::ptrdiff_t>(k)});
        }
    }
  return q;
}

QuadratureRule fitted_quadrature(const DomainSpec& spec, const FittedOptions& opt) {
  QuadratureRule q;
  q.kind = "fitted";
  q.fingerprint = hex64(fnv1a64(spec.canonical() + "|fitted|" + std::to_string(opt.levels) + "|" +
                                std::to_string(opt.angular) + "|" + std::to_string(opt.angular_levels) + "|" +
                                std::to_string(opt.coarse_panels)));
  auto push = [&](cplx z, double w) {
    if (w > 0 && spec.contains(z)) q.nodes.push_back({z, w, spec.boundary_distance_raw(z), -1});
  };
  const auto& v = spec.variant();
  if (std::holds_alternative<UnitDisc>(v) || std::holds_alternative<Annulus>(v)) {
    double r0 = 0;
    bool lo = false;
    if (auto* a = std::get_if<Annulus>(&v)) r0 = a->r_inner, lo = true;
    Rule1D rr = graded_rule(r0, 1.0, lo, true, opt.levels, opt.coarse_panels);
    const int M = opt.angular;
    for (std::size_t i = 0; i < rr.x.size(); ++i)
      for (int t = 0; t < M; ++t) {
        double th = 2 * kPi * (t + 0.5) / M;
        push(std::polar(rr.x[i], th), rr.w[i] * rr.x[i] * 2 * kPi / M);
      }
  } else if (std::holds_alternative<SlitDisc>(v)) {
    // polar around the tip; the slit sits at angles 0 and 2 pi
    Rule1D rr = graded_rule(0.0, 1.0, true, true, opt.levels, opt.coarse_panels);
    Rule1D tt = graded_rule(0.0, 2 * kPi, true, true, opt.angular_levels, std::max(2, opt.angular / 20));
    for (std::size_t i = 0; i < rr.x.size(); ++i)
      for (std::size_t t = 0; t < tt.x.size(); ++t) push(std::polar(rr.x[i], tt.x[t]), rr.w[i] * rr.x[i] * tt.w[t]);
  } else if (auto* p = std::get_if<Polygon>(&v)) {
    // fan of triangles from the centroid, graded toward the edge and its corners
    cplx c = spec.centroid();
    Rule1D ss = graded_rule(0.0, 1.0, false, true, opt.levels, opt.coarse_panels);
    Rule1D tt = graded_rule(0.0, 1.0, true, true, opt.angular_levels, opt.coarse_panels);
    const auto& vs = p->vertices;
    for (std::size_t e = 0; e < vs.size(); ++e) {
      cplx a = vs[e] - c, b = vs[(e + 1) % vs.size()] - c;
      double jac = std::abs(a.real() * b.imag() - a.imag() * b.real());
      for (std::size_t i = 0; i < ss.x.size(); ++i)
        for (std::size_t t = 0; t < tt.x.size(); ++t) {
          double s = ss.x[i];
          push(c + s * (a + tt.x[t] * (b - a)), ss.w[i] * tt.w[t] * s * jac);
        }
    }
  } else {
    throw Error(Errc::UnsupportedSpec, "fitted quadrature is planar only");
  }
  return q;
}

QuadratureRule pushforward(const QuadratureRule& rule, const std::function<cplx(cplx)>& F,
                           const std::function<cplx(cplx)>& dF, const DomainSpec& target) {
  QuadratureRule q;
  q.kind = "pushforward";
  q.boundary_depth = rule.boundary_depth;
  for (const auto& n : rule.nodes) {
    cplx z = F(n.z);
    double w = n.w * std::norm(dF(n.z));
    if (!(w > 0) || !std::isfinite(w) || !target.contains(z)) continue;
    q.nodes.push_back({z, w, target.boundary_distance_raw(z), -1});
  }
  return q;
}

}  // namespace blab
