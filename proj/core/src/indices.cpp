#include "blab/indices.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "blab/error.hpp"

namespace blab {

namespace {
json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}
}  // namespace

json IndexEstimate::to_json() const {
  json j = {{"value", num(value)}, {"slope", num(slope)}, {"intercept", num(intercept)},
            {"r_squared", num(r_squared)}, {"fit_range", fit_range}, {"method", method}};
  json xv = json::array(), yv = json::array();
  for (double x : xs) xv.push_back(num(x));
  for (double y : ys) yv.push_back(num(y));
  j["x"] = xv;
  j["y"] = yv;
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n, my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return f;
}

IndexEstimate estimate_alpha(const ScalarField& rho, const AlphaOptions& opt) {
  const GridDomain& g = *rho.grid;
  std::map<int, double> mx;
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (!g.inside(p) || !std::isfinite(rho.values[p])) continue;
    int k = collar_level(g.delta[p]);
    if (k < 1) continue;
    mx[k] = std::max(mx[k], std::abs(rho.values[p]));
  }
  std::vector<int> usable;
  for (auto [k, v] : mx)
    if (v > 0 && std::ldexp(1.0, -k) >= opt.min_width_cells * g.h) usable.push_back(k);
  if (static_cast<int>(usable.size()) < std::max(3, opt.fit_levels))
    throw Error(Errc::TooFewLevels, "need at least three usable collar levels");
  usable.erase(usable.begin(), usable.end() - opt.fit_levels);
  IndexEstimate e;
  e.method = "collar-max";
  for (int k : usable) {
    e.xs.push_back(std::log(std::ldexp(1.0, -k)));
    e.ys.push_back(std::log(mx[k]));
  }
  LineFit f = least_squares(e.xs, e.ys);
  e.value = e.slope = f.slope;
  e.intercept = f.intercept;
  e.r_squared = f.r_squared;
  e.fit_range = usable;
  return e;
}

IndexEstimate estimate_beta(const PlanarKernel& k, const QuadratureRule& quad, cplx w,
                            const std::vector<double>& p_grid, const LpOptions& opt) {
  if (p_grid.empty() || !std::is_sorted(p_grid.begin(), p_grid.end()) || p_grid.front() < 2)
    throw Error(Errc::InvalidSpec, "p_grid must be ascending with minimum >= 2");
  IndexEstimate e;
  e.method = "collar-verdict:" + k.source();
  json verdicts = json::array();
  std::vector<std::pair<double, Verdict>> vs;
  for (double p : p_grid) {
    LpScan s = lp_collar_scan(k, w, p, quad, opt);
    vs.emplace_back(p, s.verdict);
    verdicts.push_back({{"p", p}, {"verdict", verdict_name(s.verdict)}, {"ratios", s.ratios},
                        {"tail_exponent", s.tail_exponent}, {"levels", s.fit_levels}});
    if (e.fit_range.empty()) e.fit_range = s.fit_levels;
  }
  e.extra["scans"] = verdicts;
  double pd = std::numeric_limits<double>::infinity();
  for (auto [p, v] : vs)
    if (v == Verdict::Diverged) { pd = p; break; }
  double pc = -1;
  bool inversion = false;
  for (auto [p, v] : vs) {
    if (v != Verdict::Converged) continue;
    if (p < pd) pc = std::max(pc, p);
    else inversion = true;
  }
  e.extra["inversion"] = inversion;
  if (pc < 0 && !std::isfinite(pd)) throw Error(Errc::AllInconclusive, "no p gave a verdict");
  if (!std::isfinite(pd)) e.value = std::numeric_limits<double>::infinity();
  else e.value = std::max(2.0, 0.5 * ((pc < 0 ? 2.0 : pc) + pd));
  e.slope = e.value;
  e.r_squared = 1;
  return e;
}

double holder_transport(double gamma, double alpha2) {
  if (!(gamma > 0 && gamma <= 1) || !(alpha2 > 0 && alpha2 <= 1))
    throw Error(Errc::InvalidSpec, "need 0 < gamma <= 1 and 0 < alpha2 <= 1");
  return gamma * alpha2;
}

double beta_bound_main(double alpha, int n) {
  double a = std::clamp(alpha, 0.0, 1.0);
  return 2 + 2 * a / (2 * n - a);
}

double beta_bound_planar(double alpha) {
  double a = std::clamp(alpha, 0.0, 1.0);
  if (a >= 1) return std::numeric_limits<double>::infinity();
  return 2 + a / (1 - a);
}

}  // namespace blab
