#pragma once

// Closed forms and frozen reference values, written independently of the library code paths.

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

inline cplx disc_kernel(cplx z, cplx w) { return 1.0 / (pi * (1.0 - z * std::conj(w)) * (1.0 - z * std::conj(w))); }
inline double disc_green(cplx z, cplx w) { return std::log(std::abs((z - w) / (1.0 - std::conj(w) * z))); }
// extremal function of the closed disc of radius r about 0
inline double disc_extremal(cplx z, double r) {
  return std::abs(z) <= r ? -1.0 : std::log(std::abs(z)) / -std::log(r);
}
inline double disc_bergman_distance(cplx z) { return std::sqrt(2.0) * std::atanh(std::abs(z)); }

// slit disc D \ [0,1) onto the upper half plane: z -> i sqrt(-z) -> ((1+s)/(1-s))^2
inline cplx slit_to_uhp(cplx z) {
  cplx s = cplx(0, 1) * std::sqrt(-z);
  cplx q = (1.0 + s) / (1.0 - s);
  return q * q;
}
inline cplx slit_to_uhp_deriv(cplx z) {
  cplx r = std::sqrt(-z);
  cplx s = cplx(0, 1) * r;
  cplx q = (1.0 + s) / (1.0 - s);
  cplx ds = cplx(0, 1) * (-0.5 / r);
  return 2.0 * q * 2.0 / ((1.0 - s) * (1.0 - s)) * ds;
}
inline double slit_green(cplx z, cplx w) {
  cplx t = slit_to_uhp(z), u = slit_to_uhp(w);
  return std::log(std::abs((t - u) / (t - std::conj(u))));
}
inline cplx slit_kernel(cplx z, cplx w) {
  cplx t = slit_to_uhp(z), u = slit_to_uhp(w);
  cplx d = t - std::conj(u);
  return -slit_to_uhp_deriv(z) * std::conj(slit_to_uhp_deriv(w)) / (pi * d * d);
}

// Green function of C \ [-2, 2] (basin of z^2 - 2)
inline double joukowski_green(cplx w) {
  cplx r = std::sqrt(w * w - 4.0);
  cplx a = (w + r) / 2.0, b = (w - r) / 2.0;
  return std::log(std::max(std::abs(a), std::abs(b)));
}

// ||z1^j z2^k||^2 on {|z1|^a1 + |z2|^a2 < 1} by a 1-D Simpson integral in r1
inline double reinhardt_norm2_numeric(double a1, double a2, int j, int k, int panels = 200000) {
  const double q = (2.0 * k + 2) / a2;
  auto f = [&](double r) { return std::pow(r, 2 * j + 1) * std::pow(std::max(0.0, 1 - std::pow(r, a1)), q); };
  const double h = 1.0 / panels;
  double s = f(0) + f(1);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4 : 2) * f(i * h);
  return 4 * pi * pi * s * h / 3 / (2.0 * k + 2);
}

// frozen values
constexpr double log2_over_log3 = 0.63092975357145743710;
constexpr double joukowski_green_at_3 = 0.96242365011920689500;  // log((3 + sqrt 5)/2)
constexpr double disc_distance_08 = 1.5536723984241867;          // sqrt(2) artanh(0.8)
constexpr double ball_kernel_at_0 = 0.20264236728467554;         // 2/pi^2
constexpr double pi_pow_minus_quarter = 0.75112554446494248;
constexpr double inv_sqrt5 = 0.44721359549995793;

}  // namespace oracle
