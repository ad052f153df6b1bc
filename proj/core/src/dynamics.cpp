#include "blab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "blab/error.hpp"

namespace blab {

PolynomialMap::PolynomialMap(std::vector<cplx> coeffs) : a_(std::move(coeffs)) {
  while (a_.size() > 1 && a_.back() == cplx(0)) a_.pop_back();
  if (degree() < 2) throw Error(Errc::InvalidSpec, "polynomial degree must be >= 2");
  const double ad = std::abs(a_.back());
  for (int j = 0; j < degree(); ++j) S_ += std::abs(a_[j]);
  // |z| >= R gives |q(z)| >= |z|^{d-1}(|a_d||z| - S) >= 2|z| and |q(z) - a_d z^d| <= |a_d z^d| / 2
  R_ = std::max({2.0, (2 + S_) / ad, 2 * S_ / ad});
}

PolynomialMap PolynomialMap::parse(const std::string& text) {
  std::vector<cplx> c;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      double re = std::stod(tok, &pos), im = 0;
      std::string rest = tok.substr(pos);
      if (!rest.empty()) {
        // a+bi
        std::size_t p2 = 0;
        im = std::stod(rest, &p2);
        if (rest.substr(p2) != "i") throw std::invalid_argument(tok);
      }
      c.emplace_back(re, im);
    } catch (const std::exception&) {
      throw Error(Errc::InvalidSpec, "bad polynomial coefficient '" + tok + "'");
    }
  }
  std::reverse(c.begin(), c.end());
  return PolynomialMap(std::move(c));
}

cplx PolynomialMap::operator()(cplx z) const {
  cplx v = a_.back();
  for (int j = degree() - 1; j >= 0; --j) v = v * z + a_[j];
  return v;
}

cplx PolynomialMap::deriv(cplx z) const {
  cplx v = a_.back() * double(degree());
  for (int j = degree() - 1; j >= 1; --j) v = v * z + a_[j] * double(j);
  return v;
}

json PolynomialMap::to_json() const {
  json c = json::array();
  for (cplx a : a_) c.push_back({a.real(), a.imag()});
  return {{"coefficients_low_to_high", c}, {"escape_radius", R_}};
}

EscapeResult escape_green(const PolynomialMap& q, cplx w, const EscapeOptions& opt) {
  const int d = q.degree();
  const double ad = std::abs(q.coeffs().back());
  const double S = q.lower_sum();
  cplx z = w;
  cplx L = 1.0 / w;  // (q^n)'(w) / q^n(w); only used at n = 0 when w itself is outside R
  double scale = 1;  // d^{-n}
  int n = 0;
  bool escaped = false;
  for (;; ++n) {
    const double az = std::abs(z);
    if (az > q.escape_radius()) escaped = true;
    if (escaped) {
      const double err = 4 * S * scale / (d * ad * az);
      const bool done = opt.stop_at >= 0 ? n >= opt.stop_at : (err <= 1e-17 * scale || std::log(az) * d > 650);
      if (done || std::log(az) * d > 650) {
        EscapeResult r;
        r.iterations = n;
        r.g = scale * (std::log(az) + std::log(ad) / (d - 1));
        r.err = err;
        r.gradient = std::conj(scale * L);
        if (!std::isfinite(r.gradient.real()) || !std::isfinite(r.gradient.imag()))
          throw Error(Errc::DerivativeOverflow, "log-derivative recurrence overflowed");
        return r;
      }
    }
    if (n >= opt.n_max) throw Error(Errc::DidNotEscape, "orbit stayed bounded for n_max iterations");
    const cplx qz = q(z);
    L = n == 0 ? q.deriv(z) / qz : L * z * q.deriv(z) / qz;
    z = qz;
    scale /= d;
  }
}

cplx green_gradient(const PolynomialMap& q, cplx w) { return escape_green(q, w).gradient; }

DistanceBracket julia_distance(const PolynomialMap& q, cplx w) {
  EscapeResult e = escape_green(q, w);
  const double gn = std::abs(e.gradient);
  if (!(gn > 0)) throw Error(Errc::ZeroGradient, "vanishing gradient at w");
  DistanceBracket b;
  b.estimate = e.g / gn;
  b.lower = b.estimate / 4;
  b.upper = b.estimate * 4;
  return b;
}

namespace {

struct RayTrace {
  std::vector<double> log_est, log_g;
  std::vector<cplx> w;
};

// follow the gradient line of g inward from w0, in tau = log g
RayTrace trace_ray(const PolynomialMap& q, cplx w0, double step, double log_est_min) {
  RayTrace t;
  auto field = [&](cplx w, EscapeResult* out) -> std::optional<cplx> {
    try {
      EscapeResult e = escape_green(q, w);
      if (out) *out = e;
      const double n2 = std::norm(e.gradient);
      if (!(n2 > 0) || !(e.g > 0)) return std::nullopt;
      return e.g * e.gradient / n2;  // dw/dtau
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  cplx w = w0;
  for (int it = 0; it < 100000; ++it) {
    EscapeResult e;
    auto k1 = field(w, &e);
    if (!k1) break;
    const double est = e.g / std::abs(e.gradient);
    t.log_est.push_back(std::log(est));
    t.log_g.push_back(std::log(e.g));
    t.w.push_back(w);
    if (std::log(est) < log_est_min) break;
    const double hstep = -step;
    auto k2 = field(w + 0.5 * hstep * *k1, nullptr);
    if (!k2) break;
    auto k3 = field(w + 0.5 * hstep * *k2, nullptr);
    if (!k3) break;
    auto k4 = field(w + hstep * *k3, nullptr);
    if (!k4) break;
    w += hstep / 6 * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
  }
  return t;
}

// log g where the trace crosses log_est = x, with the crossing point
std::optional<std::pair<double, cplx>> at_level(const RayTrace& t, double x) {
  for (std::size_t i = 1; i < t.log_est.size(); ++i) {
    const double a = t.log_est[i - 1], b = t.log_est[i];
    if ((a - x) * (b - x) <= 0 && a != b) {
      const double s = (x - a) / (b - a);
      return std::make_pair(t.log_g[i - 1] + s * (t.log_g[i] - t.log_g[i - 1]),
                            t.w[i - 1] + s * (t.w[i] - t.w[i - 1]));
    }
  }
  return std::nullopt;
}

}  // namespace

BasinFit basin_alpha(const PolynomialMap& q, const BasinOptions& opt) {
  if (opt.rays < 4 || opt.levels < 3) throw Error(Errc::InvalidSpec, "need rays >= 4 and levels >= 3");
  std::mt19937_64 rng(opt.seed);
  const double offset = std::uniform_real_distribution<double>(0, 1)(rng);
  const double r0 = std::max(100.0, 10 * q.escape_radius());
  const double twopi = 2 * std::numbers::pi;
  const double log_min = std::log(std::ldexp(1.0, -opt.levels)) - 0.5;

  std::map<double, RayTrace> cache;
  auto ray = [&](double theta) -> const RayTrace& {
    auto it = cache.find(theta);
    if (it != cache.end()) return it->second;
    return cache.emplace(theta, trace_ray(q, std::polar(r0, theta), opt.step, log_min)).first->second;
  };
  std::vector<double> thetas(opt.rays);
  for (int r = 0; r < opt.rays; ++r) thetas[r] = twopi * (r + offset) / opt.rays;

  BasinFit out;
  IndexEstimate& e = out.estimate;
  e.method = "basin-envelope";
  std::vector<int> levels;
  for (int k = 1; k <= opt.levels; ++k) {
    const double x = std::log(std::ldexp(1.0, -k));
    int best = -1;
    double best_g = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < opt.rays; ++r) {
      auto v = at_level(ray(thetas[r]), x);
      if (v && v->first > best_g) best_g = v->first, best = r;
    }
    if (best < 0) continue;
    // golden-section refinement of the launch angle between the neighbouring rays
    auto val = [&](double th) {
      auto v = at_level(ray(th), x);
      return v ? v->first : -std::numeric_limits<double>::infinity();
    };
    double lo = thetas[best] - twopi / opt.rays, hi = thetas[best] + twopi / opt.rays;
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double c = hi - gr * (hi - lo), dd = lo + gr * (hi - lo);
    double fc = val(c), fd = val(dd);
    for (int it = 0; it < 40; ++it) {
      if (fc > fd) hi = dd, dd = c, fd = fc, c = hi - gr * (hi - lo), fc = val(c);
      else lo = c, c = dd, fc = fd, dd = lo + gr * (hi - lo), fd = val(dd);
    }
    double th = fc > fd ? c : dd;
    double lg = std::max(fc, fd);
    if (!(lg >= best_g)) th = thetas[best], lg = best_g;
    auto v = at_level(ray(th), x);
    BasinSample s;
    s.level = k;
    s.ray = best;
    s.w = v->second;
    EscapeResult er = escape_green(q, s.w);
    s.g = std::exp(lg);
    s.grad = er.gradient;
    s.dist_lo = std::exp(x) / 4;
    s.dist_hi = std::exp(x) * 4;
    out.samples.push_back(s);
    levels.push_back(k);
    e.xs.push_back(x);
    e.ys.push_back(lg);
  }
  if (levels.size() < 3) throw Error(Errc::InsufficientEscapes, "fewer than three levels reached");
  // asymptotic half of the levels enters the slope
  const std::size_t nfit = std::max<std::size_t>(3, levels.size() / 2);
  std::vector<double> fx(e.xs.end() - nfit, e.xs.end()), fy(e.ys.end() - nfit, e.ys.end());
  LineFit f = least_squares(fx, fy);
  e.value = e.slope = f.slope;
  e.intercept = f.intercept;
  e.r_squared = f.r_squared;
  e.fit_range.assign(levels.end() - nfit, levels.end());
  return out;
}

}  // namespace blab
