#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "blab/geometry.hpp"

namespace blab {

enum class FieldKind { Extremal, Green, Mu, Nu, Metric, Generic };
const char* field_kind_name(FieldKind k);
FieldKind field_kind_from(const std::string& s);

struct ScalarField {
  std::shared_ptr<const GridDomain> grid;
  std::vector<double> values;  // aligned with grid->mask, NaN outside
  FieldKind kind = FieldKind::Generic;
  double tol = 0;
  json meta = json::object();

  double operator[](std::size_t i) const { return values[i]; }
  // bilinear interpolation from the four surrounding centers, all masked and finite
  std::optional<double> bilinear(cplx z) const;
};

struct BallSpec {
  cplx center;
  double radius = 0;
  json to_json() const;
  static BallSpec from_json(const json& j);
};

// center = centroid, radius = delta(centroid)/4
BallSpec default_ball(const GridDomain& grid);

struct SolverOptions {
  double tol = 1e-8;
  double omega = 0;  // 0 selects 2/(1+sin(pi h/L))
  long max_sweeps = 1000000;
};

struct SolveStats {
  long sweeps = 0;
  double last_update = 0;
  double omega = 0;
};

// discrete relative extremal function of the closed ball (projected SOR on the obstacle problem)
ScalarField extremal_numeric(std::shared_ptr<const GridDomain> grid, const BallSpec& ball, double tol,
                             SolveStats* stats = nullptr);
ScalarField extremal_numeric(std::shared_ptr<const GridDomain> grid, const BallSpec& ball,
                             const SolverOptions& opt, SolveStats* stats = nullptr);

class GreenField {
 public:
  ScalarField field;            // g(., w), -inf at the pole cell
  std::vector<double> regular;  // g - log|z - w| on masked cells
  cplx pole;

  double evaluate(cplx z) const;
  // bicubic Lagrange interpolation of the regular part (bilinear or nearest near the boundary)
  double regular_at(cplx z) const;
};

GreenField green_numeric(std::shared_ptr<const GridDomain> grid, cplx w, double tol, SolveStats* stats = nullptr);
GreenField green_numeric(std::shared_ptr<const GridDomain> grid, cplx w, const SolverOptions& opt,
                         SolveStats* stats = nullptr);

ScalarField sample_field(std::shared_ptr<const GridDomain> grid, const std::function<double(cplx)>& f,
                         FieldKind kind);

using Field2 = std::function<double(const Point2&)>;

// g((z1,z2),(a,b)) = max(g1(z1,a), g2(z2,b)); factors need closed-form Green functions
Field2 product_green(const DomainSpec& product, const Point2& pole);
Field2 product_extremal(std::function<double(cplx)> rho1, std::function<double(cplx)> rho2);
// disc extremal function of the closed disc of radius r about 0
double disc_extremal(cplx z, double r);

double mu_of(double rho);
double nu_of(double rho, int n);

struct MuNu {
  ScalarField mu;
  ScalarField nu;
};
MuNu mu_nu(const ScalarField& rho, int n);

enum class InclusionDirection { Lower, Upper };

// lower: C = weight / min_{g<-1} |rho|;  upper: C = max_{g<-1} |rho| / weight
double inclusion_constant(const ScalarField& g, const ScalarField& rho, double weight, InclusionDirection dir);

// max over seeded pairs of (r rho(z1) - rho(z2)) / |z1 - z2|^alpha, clamped at 0
double quasi_holder_fit(const ScalarField& rho, double r, double alpha, int samples, std::uint64_t seed);

// sub-cell evaluation of a field vanishing on the boundary: interpolate field/template, multiply back
class RatioInterpolant {
 public:
  RatioInterpolant(const ScalarField& f, std::function<double(cplx)> templ);
  double operator()(cplx z) const;

 private:
  const ScalarField* f_;
  std::function<double(cplx)> templ_;
  std::vector<double> ratio_;
  std::optional<BallSpec> ball_;
};

// K(z,w) = (2/pi) d^2 g / dz dwbar by centered differences of four Green solves (poles w +- h, w +- ih)
class SchifferKernel {
 public:
  SchifferKernel(std::shared_ptr<const GridDomain> grid, cplx w, double tol);
  cplx operator()(cplx z) const;
  cplx pole() const { return w_; }

 private:
  std::shared_ptr<const GridDomain> grid_;
  cplx w_;
  std::vector<GreenField> g_;  // poles w+h, w-h, w+ih, w-ih
};

SchifferKernel schiffer_kernel(std::shared_ptr<const GridDomain> grid, cplx w, double tol);

}  // namespace blab
