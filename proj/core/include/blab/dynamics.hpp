#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blab/geometry.hpp"
#include "blab/indices.hpp"

namespace blab {

class PolynomialMap {
 public:
  // coefficients a_0..a_d
  explicit PolynomialMap(std::vector<cplx> coeffs);
  // "1,0,-2" lists coefficients from the leading one down (z^2 - 2)
  static PolynomialMap parse(const std::string& text);

  int degree() const { return static_cast<int>(a_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return a_; }
  double escape_radius() const { return R_; }
  double lower_sum() const { return S_; }  // sum_{j<d} |a_j|
  cplx operator()(cplx z) const;
  cplx deriv(cplx z) const;
  json to_json() const;

 private:
  std::vector<cplx> a_;
  double R_ = 2, S_ = 0;
};

struct EscapeResult {
  double g = 0;
  double err = 0;
  int iterations = 0;
  cplx gradient;  // g_x + i g_y
};

struct EscapeOptions {
  int n_max = 2000;
  int stop_at = -1;  // >= 0: stop after exactly this many iterations if escaped by then
};

EscapeResult escape_green(const PolynomialMap& q, cplx w, const EscapeOptions& opt = {});
cplx green_gradient(const PolynomialMap& q, cplx w);

struct DistanceBracket {
  double lower = 0, upper = 0, estimate = 0;  // estimate = g / |grad g|
};
DistanceBracket julia_distance(const PolynomialMap& q, cplx w);

struct BasinSample {
  int level = 0;
  int ray = 0;
  cplx w;
  double g = 0;
  cplx grad;
  double dist_lo = 0, dist_hi = 0;
};

struct BasinOptions {
  int rays = 64;
  int levels = 8;
  std::uint64_t seed = 3;
  double step = 0.02;   // RK4 step in log g
};

struct BasinFit {
  IndexEstimate estimate;
  std::vector<BasinSample> samples;  // envelope point per level
};

// gradient lines of g followed inward; at D = 2^{-k} the largest g over rays, fit of log g against log D
BasinFit basin_alpha(const PolynomialMap& q, const BasinOptions& opt);

}  // namespace blab
