#include <cmath>
#include <numbers>

#include "blab/bergman.hpp"
#include "blab/error.hpp"

namespace blab {

namespace {
constexpr double kPi = std::numbers::pi;
}

double reinhardt_norm2_exact(double a1, double a2, int j, int k) {
  double al1 = (2.0 * j + 2) / a1, al2 = (2.0 * k + 2) / a2;
  return 4 * kPi * kPi / (a1 * a2) * std::exp(std::lgamma(al1) + std::lgamma(al2) - std::lgamma(al1 + al2 + 1));
}

ReinhardtBasis reinhardt_gram(double a1, double a2, int N) {
  if (!(a1 > 0 && a2 > 0) || N < 0) throw Error(Errc::InvalidSpec, "bad Reinhardt basis parameters");
  ReinhardtBasis b;
  b.a1 = a1, b.a2 = a2, b.N = N;
  // s_i = r_i^{a_i} on the simplex, collapsed as s1 = x, s2 = (1-x) y
  Rule1D rx = graded_rule(0.0, 1.0, true, true, 40, 2);
  Rule1D ry = graded_rule(0.0, 1.0, true, true, 40, 2);
  for (int d = 0; d <= N; ++d)
    for (int j = d; j >= 0; --j) {
      int k = d - j;
      double al1 = (2.0 * j + 2) / a1, al2 = (2.0 * k + 2) / a2;
      double ix = 0, iy = 0;
      for (std::size_t i = 0; i < rx.x.size(); ++i)
        ix += rx.w[i] * std::pow(rx.x[i], al1 - 1) * std::pow(1 - rx.x[i], al2);
      for (std::size_t i = 0; i < ry.x.size(); ++i) iy += ry.w[i] * std::pow(ry.x[i], al2 - 1);
      b.exponents.emplace_back(j, k);
      b.norms2.push_back(4 * kPi * kPi / (a1 * a2) * ix * iy);
    }
  return b;
}

cplx ReinhardtBasis::K(const Point2& z, const Point2& w) const {
  cplx x1 = z.z1 * std::conj(w.z1), x2 = z.z2 * std::conj(w.z2);
  cplx s = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    s += std::pow(x1, exponents[i].first) * std::pow(x2, exponents[i].second) / norms2[i];
  return s;
}

namespace {

cplx reinhardt_series(double a1, double a2, const Point2& z, const Point2& w) {
  cplx x1 = z.z1 * std::conj(w.z1), x2 = z.z2 * std::conj(w.z2);
  double l1 = std::log(std::abs(x1)), l2 = std::log(std::abs(x2));
  cplx sum = 0;
  double prev = 0;
  int shrinking = 0;
  for (int d = 0; d < 20000; ++d) {
    cplx shell = 0;
    double mag = 0;
    for (int j = 0; j <= d; ++j) {
      int k = d - j;
      double lt = -std::log(reinhardt_norm2_exact(a1, a2, j, k));
      if (j) lt += j * l1;
      if (k) lt += k * l2;
      if ((j && !std::isfinite(l1)) || (k && !std::isfinite(l2))) continue;
      double t = std::exp(lt);
      mag += t;
      cplx ph = std::polar(1.0, j * std::arg(x1) + k * std::arg(x2));
      shell += t * ph;
    }
    sum += shell;
    if (d > 0 && mag < prev) ++shrinking;
    else shrinking = 0;
    if (d >= 2 && (mag == 0 || shrinking >= 3)) {
      double q = prev > 0 ? mag / prev : 0;
      if (q < 1) {
        double tail = mag * q / (1 - q);
        if (tail < 1e-13 * std::abs(sum)) return sum;
      }
    }
    prev = mag;
  }
  throw Error(Errc::NoConvergence, "Reinhardt kernel series did not converge");
}

}  // namespace

KernelValue kernel_exact(const DomainSpec& spec, const Point2& z, const Point2& w) {
  KernelValue v;
  if (auto* p = std::get_if<Product>(&spec.variant())) {
    KernelValue a = kernel_exact(*p->left, z.z1, w.z1), b = kernel_exact(*p->right, z.z2, w.z2);
    v.K_zw = a.K_zw * b.K_zw;
    v.K_z = a.K_z * b.K_z;
    v.K_w = a.K_w * b.K_w;
  } else if (auto* r = std::get_if<ReinhardtEllipsoid>(&spec.variant())) {
    v.K_zw = reinhardt_series(r->a1, r->a2, z, w);
    v.K_z = reinhardt_series(r->a1, r->a2, z, z).real();
    v.K_w = reinhardt_series(r->a1, r->a2, w, w).real();
  } else {
    throw Error(Errc::UnsupportedSpec, "C^2 kernel needs a product or Reinhardt domain");
  }
  v.B = std::norm(v.K_zw) / (v.K_z * v.K_w);
  return v;
}

}  // namespace blab
