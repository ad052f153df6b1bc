#include "blab/conformal.hpp"

#include <cmath>
#include <numbers>

namespace blab {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx I(0, 1);
}  // namespace

cplx mobius(cplx a, cplx u) { return (u + a) / (1.0 + std::conj(a) * u); }

cplx mobius_deriv(cplx a, cplx u) {
  cplx d = 1.0 + std::conj(a) * u;
  return (1.0 - std::norm(a)) / (d * d);
}

cplx ConformalModel::kernel(cplx z, cplx w) const {
  cplx fz = map(z), fw = map(w);
  cplx d = 1.0 - fz * std::conj(fw);
  return deriv(z) * std::conj(deriv(w)) / (kPi * d * d);
}

double ConformalModel::kernel_diag(cplx z) const {
  double s = 1.0 - std::norm(map(z));
  return std::norm(deriv(z)) / (kPi * s * s);
}

double ConformalModel::green(cplx z, cplx w) const {
  cplx fz = map(z), fw = map(w);
  return std::log(std::abs(fz - fw) / std::abs(1.0 - std::conj(fw) * fz));
}

double ConformalModel::metric(cplx z) const {
  double s = 1.0 - std::norm(map(z));
  return 2.0 * std::norm(deriv(z)) / (s * s);
}

double ConformalModel::bergman_distance(cplx z, cplx w) const {
  cplx fz = map(z), fw = map(w);
  double r = std::abs(fz - fw) / std::abs(1.0 - std::conj(fw) * fz);
  return std::sqrt(2.0) * std::atanh(std::min(r, 1.0));
}

double ConformalModel::normalized_kernel(cplx z, cplx w) const {
  cplx fz = map(z), fw = map(w);
  // conformally invariant, so evaluate on the disc: (1-|a|^2)^2 (1-|b|^2)^2 / |1 - a conj b|^4
  double a = 1.0 - std::norm(fz), b = 1.0 - std::norm(fw);
  double c = std::norm(1.0 - fz * std::conj(fw));
  return a * a * b * b / (c * c);
}

cplx SlitDiscModel::map(cplx z) const {
  cplx u = std::sqrt(-z);
  cplx up = I * u;
  cplx v = (1.0 + up) / (1.0 - up);
  cplx s = v * v;
  return (s - I) / (s + I);
}

cplx SlitDiscModel::deriv(cplx z) const {
  cplx u = std::sqrt(-z);
  cplx up = I * u;
  cplx v = (1.0 + up) / (1.0 - up);
  cplx s = v * v;
  cplx dv = 2.0 / ((1.0 - up) * (1.0 - up));
  cplx dt = 2.0 * I / ((s + I) * (s + I));
  return dt * (2.0 * v) * dv * I * (-1.0 / (2.0 * u));
}

cplx SlitDiscModel::inverse(cplx t) const {
  cplx s = I * (1.0 + t) / (1.0 - t);
  cplx v = std::sqrt(s);
  cplx up = (v - 1.0) / (v + 1.0);
  cplx u = -I * up;
  return -u * u;
}

std::shared_ptr<const ConformalModel> conformal_model(const DomainSpec& spec) {
  if (std::holds_alternative<UnitDisc>(spec.variant())) return std::make_shared<DiscModel>();
  if (std::holds_alternative<SlitDisc>(spec.variant())) return std::make_shared<SlitDiscModel>();
  return nullptr;
}

}  // namespace blab
