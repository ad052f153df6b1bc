#include "blab/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "blab/error.hpp"

namespace blab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log_abs(cplx z) {
  double a = std::abs(z);
  return a > 0 ? std::log(a) : kNegInf;
}

std::vector<double> cosine_spaced(double a, double b, int m) {
  std::vector<double> x(m);
  if (m == 1) {
    x[0] = 0.5 * (a + b);
    return x;
  }
  for (int k = 0; k < m; ++k)
    x[k] = a + (b - a) * 0.5 * (1 - std::cos(std::numbers::pi * k / (m - 1)));
  return x;
}

void cantor_pieces(const CantorLinear& c, int level, double a, double b, std::vector<std::pair<double, double>>& out) {
  if (level == c.levels) {
    out.emplace_back(a, b);
    return;
  }
  double len = (b - a) * c.ratio(level);
  cantor_pieces(c, level + 1, a, a + len, out);
  cantor_pieces(c, level + 1, b - len, b, out);
}

struct Exchange {
  FeketeResult run(const std::vector<cplx>& cand, int n, std::uint64_t seed) const {
    const int m = static_cast<int>(cand.size());
    std::mt19937_64 rng(seed);
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<int> cur(idx.begin(), idx.begin() + n);

    // P[c] = sum of finite log|c - x_j| over the configuration; occ[c] counts coincident points
    std::vector<double> P(m, 0.0);
    std::vector<int> occ(m, 0);
    auto add = [&](cplx x, double sign) {
      for (int c = 0; c < m; ++c) {
        double a = std::abs(cand[c] - x);
        if (a > 0) P[c] += sign * std::log(a);
        else occ[c] += sign > 0 ? 1 : -1;
      }
    };
    for (int j : cur) add(cand[j], 1);

    for (int sweep = 0; sweep < 1000; ++sweep) {
      bool moved = false;
      for (int i = 0; i < n; ++i) {
        const cplx xi = cand[cur[i]];
        add(xi, -1);
        int best = cur[i];
        double best_val = occ[best] > 0 ? kNegInf : P[best];
        for (int c = 0; c < m; ++c) {
          if (occ[c] > 0) continue;
          if (P[c] > best_val + 1e-12 * (1 + std::abs(best_val))) best_val = P[c], best = c;
        }
        if (best != cur[i]) moved = true;
        cur[i] = best;
        add(cand[best], 1);
      }
      if (!moved) break;
    }
    FeketeResult r;
    std::sort(cur.begin(), cur.end());
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += safe_log_abs(cand[cur[i]] - cand[cur[j]]);
    r.log_product = s;
    r.d_n = std::isfinite(s) ? std::exp(2 * s / (double(n) * (n - 1))) : 0.0;
    for (int c : cur) r.points.push_back(cand[c]);
    return r;
  }
};

}  // namespace

CompactSetSpec::CompactSetSpec(Variant v) : v_(std::move(v)) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) {
          if (!(s.b >= s.a)) throw Error(Errc::InvalidSpec, "interval needs a <= b");
        } else if constexpr (std::is_same_v<T, Circle>) {
          if (!(s.radius >= 0)) throw Error(Errc::InvalidSpec, "circle radius must be >= 0");
        } else if constexpr (std::is_same_v<T, CantorLinear>) {
          if (s.levels < 0) throw Error(Errc::InvalidSpec, "cantor levels must be >= 0");
          if (!s.ratios.empty() && static_cast<int>(s.ratios.size()) < s.levels)
            throw Error(Errc::InvalidSpec, "cantor ratios list shorter than levels");
          for (int k = 0; k < s.levels; ++k)
            if (!(s.ratio(k) > 0 && s.ratio(k) < 0.5))
              throw Error(Errc::InvalidSpec, "cantor ratios must lie in (0, 1/2) for disjoint pieces");
        } else {
          if (s.points.empty()) throw Error(Errc::InvalidSpec, "finite set is empty");
        }
      },
      v_);
}

CompactSetSpec CompactSetSpec::from_json(const json& j) {
  try {
    const std::string t = j.at("type").get<std::string>();
    if (t == "interval") return CompactSetSpec(Interval{j.at("a").get<double>(), j.at("b").get<double>()});
    if (t == "circle") {
      Circle c{j.at("radius").get<double>()};
      if (j.contains("center")) c.center = {j["center"][0].get<double>(), j["center"][1].get<double>()};
      return CompactSetSpec(c);
    }
    if (t == "cantor_linear") {
      CantorLinear c;
      c.levels = j.at("levels").get<int>();
      if (j.contains("lambda")) c.lambda = j["lambda"].get<double>();
      if (j.contains("ratios")) c.ratios = j["ratios"].get<std::vector<double>>();
      return CompactSetSpec(c);
    }
    if (t == "finite_points") {
      FinitePoints f;
      for (const auto& p : j.at("points")) f.points.emplace_back(p[0].get<double>(), p[1].get<double>());
      return CompactSetSpec(f);
    }
    throw Error(Errc::UnsupportedSpec, "unknown compact set type '" + t + "'");
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidSpec, e.what());
  }
}

json CompactSetSpec::to_json() const {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) {
          return {{"type", "interval"}, {"a", s.a}, {"b", s.b}};
        } else if constexpr (std::is_same_v<T, Circle>) {
          return {{"type", "circle"}, {"radius", s.radius}, {"center", {s.center.real(), s.center.imag()}}};
        } else if constexpr (std::is_same_v<T, CantorLinear>) {
          json j = {{"type", "cantor_linear"}, {"lambda", s.lambda}, {"levels", s.levels}};
          if (!s.ratios.empty()) j["ratios"] = s.ratios;
          return j;
        } else {
          json pts = json::array();
          for (cplx p : s.points) pts.push_back({p.real(), p.imag()});
          return {{"type", "finite_points"}, {"points", pts}};
        }
      },
      v_);
}

CompactSetSpec CompactSetSpec::scaled(double c) const {
  return std::visit(
      [c](auto s) -> CompactSetSpec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Interval>) {
          double a = c * s.a, b = c * s.b;
          return CompactSetSpec(Interval{std::min(a, b), std::max(a, b)});
        } else if constexpr (std::is_same_v<T, Circle>) {
          return CompactSetSpec(Circle{std::abs(c) * s.radius, c * s.center});
        } else if constexpr (std::is_same_v<T, CantorLinear>) {
          // no scale parameter: express as the finite union through its candidate sites
          throw Error(Errc::UnsupportedSpec, "cantor sets are fixed on [0,1]");
        } else {
          for (cplx& p : s.points) p *= c;
          return CompactSetSpec(s);
        }
      },
      v_);
}

std::vector<cplx> CompactSetSpec::candidates(int m) const {
  return std::visit(
      [m](const auto& s) -> std::vector<cplx> {
        using T = std::decay_t<decltype(s)>;
        std::vector<cplx> out;
        if constexpr (std::is_same_v<T, Interval>) {
          for (double x : cosine_spaced(s.a, s.b, m)) out.emplace_back(x, 0);
        } else if constexpr (std::is_same_v<T, Circle>) {
          for (int k = 0; k < m; ++k) out.push_back(s.center + std::polar(s.radius, 2 * std::numbers::pi * k / m));
        } else if constexpr (std::is_same_v<T, CantorLinear>) {
          std::vector<std::pair<double, double>> pieces;
          cantor_pieces(s, 0, 0.0, 1.0, pieces);
          int per = std::max(2, m / static_cast<int>(pieces.size()));
          for (auto [a, b] : pieces)
            for (double x : cosine_spaced(a, b, per)) out.emplace_back(x, 0);
        } else {
          out = s.points;
        }
        return out;
      },
      v_);
}

FeketeResult fekete_points(const CompactSetSpec& spec, int n, const FeketeOptions& opt) {
  if (n < 2) throw Error(Errc::InvalidSpec, "need at least two points");
  std::vector<cplx> cand = spec.candidates(opt.candidates_per_point * n);
  bool degenerate = true;
  for (cplx c : cand)
    if (std::abs(c - cand.front()) > 0) degenerate = false;
  if (degenerate) throw Error(Errc::DegenerateSet, "all candidate sites coincide");
  if (static_cast<int>(cand.size()) < n) {
    FeketeResult r;  // more points than sites: some pair repeats
    r.points = cand;
    r.log_product = kNegInf;
    return r;
  }
  const int R = std::max(1, opt.restarts);
  std::vector<FeketeResult> res(R);
  auto job = [&](int r) { return Exchange{}.run(cand, n, opt.seed * 0x9E3779B97F4A7C15ULL + r); };
  const int jobs = opt.jobs > 0 ? opt.jobs : R;
  for (int start = 0; start < R; start += jobs) {
    std::vector<std::future<FeketeResult>> fut;
    for (int r = start; r < std::min(R, start + jobs); ++r) fut.push_back(std::async(std::launch::async, job, r));
    for (int r = start; r < std::min(R, start + jobs); ++r) res[r] = fut[r - start].get();
  }
  int best = 0;
  for (int r = 1; r < R; ++r)
    if (res[r].log_product > res[best].log_product) best = r;
  res[best].restart = best;
  return res[best];
}

CapacityEstimate capacity_estimate(const CompactSetSpec& spec, int n, const FeketeOptions& opt) {
  if (n < 8) throw Error(Errc::InvalidSpec, "n_points must be >= 8");
  CapacityEstimate e;
  e.n = {n, n / 2, n / 4};
  for (int m : e.n) {
    FeketeResult r = fekete_points(spec, m, opt);
    e.d_n.push_back(r.d_n);
    if (m == n) e.best = std::move(r);
  }
  for (double d : e.d_n)
    if (!(d > 0)) return e;  // polar: value stays 0
  Eigen::Matrix3d A;
  Eigen::Vector3d y;
  for (int i = 0; i < 3; ++i) {
    double m = e.n[i];
    A(i, 0) = 1;
    A(i, 1) = std::log(m) / (m - 1);
    A(i, 2) = 1 / (m - 1);
    y(i) = std::log(e.d_n[i]);
  }
  e.value = std::exp(A.fullPivLu().solve(y)(0));
  return e;
}

double fekete_capacity(const CompactSetSpec& spec, int n, int restarts, std::uint64_t seed) {
  FeketeOptions opt;
  opt.restarts = restarts;
  opt.seed = seed;
  return capacity_estimate(spec, n, opt).value;
}

double moran_dimension(const std::vector<double>& ratios) {
  if (ratios.empty()) throw Error(Errc::InvalidRatios, "no ratios");
  for (double r : ratios)
    if (!(r > 0 && r < 1)) throw Error(Errc::InvalidRatios, "ratios must lie in (0,1)");
  if (ratios.size() == 1) return 0.0;
  auto f = [&](double s) {
    double t = -1;
    for (double r : ratios) t += std::pow(r, s);
    return t;
  };
  double lo = 0, hi = 1;
  while (f(hi) > 0) hi *= 2;
  while (hi - lo > 1e-8) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  // Newton polish to full precision
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    double df = 0;
    for (double r : ratios) df += std::pow(r, s) * std::log(r);
    s -= f(s) / df;
  }
  return s;
}

double beta_upper_planar(double dim) {
  if (!(dim >= 0 && dim < 1)) throw Error(Errc::DimOutOfRange, "dimension must lie in [0,1)");
  return 2 + dim / (1 - dim);
}

}  // namespace blab
