#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "blab/geometry.hpp"

namespace blab {

struct Interval {
  double a = -1, b = 1;
};
struct Circle {
  double radius = 1;
  cplx center{0, 0};
};
// two-piece construction on [0,1]; level k keeps both ends with ratio ratios[k] (or lambda)
struct CantorLinear {
  double lambda = 1.0 / 3;
  int levels = 4;
  std::vector<double> ratios;  // optional level-dependent ratios, overrides lambda
  double ratio(int level) const { return ratios.empty() ? lambda : ratios.at(level); }
};
struct FinitePoints {
  std::vector<cplx> points;
};

class CompactSetSpec {
 public:
  using Variant = std::variant<Interval, Circle, CantorLinear, FinitePoints>;
  explicit CompactSetSpec(Variant v);
  static CompactSetSpec from_json(const json& j);
  json to_json() const;
  const Variant& variant() const { return v_; }
  CompactSetSpec scaled(double c) const;
  // m candidate sites: cosine spaced on intervals, uniform on circles
  std::vector<cplx> candidates(int m) const;

 private:
  Variant v_;
};

struct FeketeResult {
  double d_n = 0;             // exp(mean log pairwise distance)
  std::vector<cplx> points;
  int restart = 0;            // index of the winning restart
  double log_product = 0;
};

struct FeketeOptions {
  int restarts = 8;
  int candidates_per_point = 64;
  std::uint64_t seed = 7;
  int jobs = 0;  // 0: one thread per restart
};

// coordinate-exchange maximization of the pairwise product over the candidate sites
FeketeResult fekete_points(const CompactSetSpec& spec, int n, const FeketeOptions& opt = {});

struct CapacityEstimate {
  double value = 0;                  // extrapolated to n = infinity
  std::vector<int> n;                // n, n/2, n/4
  std::vector<double> d_n;
  FeketeResult best;                 // configuration at the requested n
};

// log d_m = log c + a log(m)/(m-1) + b/(m-1) through m = n, n/2, n/4
CapacityEstimate capacity_estimate(const CompactSetSpec& spec, int n, const FeketeOptions& opt = {});
double fekete_capacity(const CompactSetSpec& spec, int n, int restarts, std::uint64_t seed);

// s with sum r_i^s = 1
double moran_dimension(const std::vector<double>& ratios);
// 2 + d/(1 - d)
double beta_upper_planar(double dim);

}  // namespace blab
