#pragma once

#include <memory>

#include "blab/geometry.hpp"

namespace blab {

// Riemann map f : Omega -> D for simply connected planar fixtures, with inverse.
// Closed-form Bergman kernel, Green function and metric follow by transport.
class ConformalModel {
 public:
  virtual ~ConformalModel() = default;
  virtual cplx map(cplx z) const = 0;
  virtual cplx deriv(cplx z) const = 0;
  virtual cplx inverse(cplx u) const = 0;
  cplx inverse_deriv(cplx u) const { return 1.0 / deriv(inverse(u)); }

  cplx kernel(cplx z, cplx w) const;
  double kernel_diag(cplx z) const;
  double green(cplx z, cplx w) const;
  double metric(cplx z) const;          // b = d^2 log K / dz dzbar
  double bergman_distance(cplx z, cplx w) const;
  double normalized_kernel(cplx z, cplx w) const;  // |K(z,w)|^2 / (K(z)K(w))
};

class DiscModel final : public ConformalModel {
 public:
  cplx map(cplx z) const override { return z; }
  cplx deriv(cplx) const override { return 1.0; }
  cplx inverse(cplx u) const override { return u; }
};

// D minus [0,1): z -> sqrt(-z) -> i(.) -> Cayley to quadrant -> square -> Cayley to disc
class SlitDiscModel final : public ConformalModel {
 public:
  cplx map(cplx z) const override;
  cplx deriv(cplx z) const override;
  cplx inverse(cplx u) const override;
};

// nullptr when no closed form is available
std::shared_ptr<const ConformalModel> conformal_model(const DomainSpec& spec);

// disc automorphism u -> (u + a)/(1 + conj(a) u), sending 0 to a
cplx mobius(cplx a, cplx u);
cplx mobius_deriv(cplx a, cplx u);

}  // namespace blab
