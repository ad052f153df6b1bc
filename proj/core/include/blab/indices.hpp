#pragma once

#include <string>
#include <vector>

#include "blab/bergman.hpp"
#include "blab/potential.hpp"

namespace blab {

struct IndexEstimate {
  double value = 0;
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  std::vector<int> fit_range;
  std::string method;
  std::vector<double> xs, ys;  // fit data
  json extra = json::object();
  json to_json() const;
};

struct LineFit {
  double slope = 0, intercept = 0, r_squared = 0;
};
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

struct AlphaOptions {
  double min_width_cells = 4;  // usable collars need 2^{-k} >= min_width_cells * h
  int fit_levels = 3;          // finest usable levels entering the fit
};

// slope of log max_{collar k} |rho| against log 2^{-k}
IndexEstimate estimate_alpha(const ScalarField& rho, const AlphaOptions& opt = {});

// midpoint between the largest converged and smallest diverged p of collar scans
IndexEstimate estimate_beta(const PlanarKernel& k, const QuadratureRule& quad, cplx w,
                            const std::vector<double>& p_grid, const LpOptions& opt);

double holder_transport(double gamma, double alpha2);

// 2 + 2a/(2n - a), with a clamped to [0, 1]
double beta_bound_main(double alpha, int n);
// 2 + a/(1 - a); +inf at a >= 1
double beta_bound_planar(double alpha);

}  // namespace blab
