#pragma once

#include <functional>
#include <string>
#include <vector>

#include "blab/geometry.hpp"

namespace blab {

struct QuadNode {
  cplx z;
  double w;              // area weight
  double delta;          // boundary distance at z
  std::ptrdiff_t cell;   // source grid cell, -1 for fitted rules
};

struct QuadratureRule {
  std::vector<QuadNode> nodes;
  int boundary_depth = 0;
  std::string kind;  // "grid", "fitted" or "pushforward"
  std::string fingerprint;

  double total_weight() const;
  std::size_t size() const { return nodes.size(); }
};

// midpoint rule on the grid; cells touching the boundary layer are quadrisected `depth` times
QuadratureRule build_quadrature(const GridDomain& grid, int boundary_depth);

struct FittedOptions {
  int levels = 24;          // geometric radial panels toward each singular end
  int angular = 256;        // trapezoid points for periodic angles
  int angular_levels = 16;  // geometric panels toward the slit in angle
  int coarse_panels = 2;    // uniform panels before grading starts
};

// tensor Gauss-Legendre rule fitted to the boundary (disc, annulus, slit disc, polygon)
QuadratureRule fitted_quadrature(const DomainSpec& spec, const FittedOptions& opt = {});

// image of a rule under a holomorphic map F with derivative dF; deltas recomputed on target
QuadratureRule pushforward(const QuadratureRule& rule, const std::function<cplx(cplx)>& F,
                           const std::function<cplx(cplx)>& dF, const DomainSpec& target);

// composite 20-point Gauss-Legendre on [a,b] with panels graded geometrically
// toward a (grade_lo) and/or b (grade_hi)
struct Rule1D {
  std::vector<double> x, w;
};
Rule1D graded_rule(double a, double b, bool grade_lo, bool grade_hi, int levels, int coarse_panels = 2);

}  // namespace blab
