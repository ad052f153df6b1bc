#include "blab/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blab/error.hpp"

namespace blab {

namespace {
constexpr double kPi = std::numbers::pi;

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i], sxx += x[i] * x[i], sxy += x[i] * y[i];
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}
}  // namespace

std::function<cplx(cplx)> PlanarKernel::column(cplx w) const {
  return [this, w](cplx z) { return K(z, w); };
}

KernelValue kernel(const PlanarKernel& k, cplx z, cplx w) {
  KernelValue v;
  v.K_zw = k.K(z, w);
  v.K_z = k.diag(z);
  v.K_w = k.diag(w);
  v.B = std::norm(v.K_zw) / (v.K_z * v.K_w);
  return v;
}

namespace {
// zeta^e for each exponent, by repeated multiplication
void powers(cplx zeta, const std::vector<int>& ex, int N, std::vector<cplx>& pos, std::vector<cplx>& neg,
            cplx* out) {
  pos[0] = 1;
  for (int k = 1; k <= N; ++k) pos[k] = pos[k - 1] * zeta;
  bool need_neg = false;
  for (int e : ex) need_neg = need_neg || e < 0;
  if (need_neg) {
    cplx inv = 1.0 / zeta;
    neg[0] = 1;
    for (int k = 1; k <= N; ++k) neg[k] = neg[k - 1] * inv;
  }
  for (std::size_t a = 0; a < ex.size(); ++a) out[a] = ex[a] >= 0 ? pos[ex[a]] : neg[-ex[a]];
}
}  // namespace

Eigen::VectorXcd OrthoBasis::monomials(cplx z) const {
  std::vector<cplx> pos(N + 1), neg(N + 1);
  Eigen::VectorXcd m(exponents.size());
  powers((z - center) / scale, exponents, N, pos, neg, m.data());
  return m;
}

Eigen::VectorXcd OrthoBasis::phi(cplx z) const { return factor.triangularView<Eigen::Lower>() * monomials(z); }

Eigen::VectorXcd OrthoBasis::dphi(cplx z) const {
  const cplx zeta = (z - center) / scale;
  std::vector<cplx> pos(N + 2), neg(N + 2);
  pos[0] = neg[0] = 1;
  for (int k = 1; k <= N + 1; ++k) pos[k] = pos[k - 1] * zeta;
  Eigen::VectorXcd m(exponents.size());
  bool need_neg = false;
  for (int e : exponents) need_neg = need_neg || e < 0;
  if (need_neg)
    for (int k = 1; k <= N + 1; ++k) neg[k] = neg[k - 1] / zeta;
  for (std::size_t a = 0; a < exponents.size(); ++a) {
    int e = exponents[a];
    cplx d = e > 0 ? pos[e - 1] : e < 0 ? neg[1 - e] : cplx(0);
    m[a] = static_cast<double>(e) * d / scale;
  }
  return factor.triangularView<Eigen::Lower>() * m;
}

cplx OrthoBasis::K(cplx z, cplx w) const { return phi(z).transpose() * phi(w).conjugate(); }

double OrthoBasis::diag(cplx z) const { return phi(z).squaredNorm(); }

double OrthoBasis::metric(cplx z) const { return bergman_metric(*this, z); }

std::function<cplx(cplx)> OrthoBasis::column(cplx w) const {
  Eigen::VectorXcd pw = phi(w).conjugate();
  return [this, pw](cplx z) -> cplx { return phi(z).transpose() * pw; };
}

cplx OrthoBasis::K_truncated(cplx z, cplx w, int n) const {
  Eigen::VectorXcd a = phi(z), b = phi(w);
  cplx s = 0;
  for (std::size_t k = 0; k < exponents.size(); ++k)
    if (std::abs(exponents[k]) <= n) s += a[k] * std::conj(b[k]);
  return s;
}

OrthoBasis gram(const QuadratureRule& quad, int N, const DomainSpec& spec, double thr) {
  if (N < 0) throw Error(Errc::InvalidSpec, "N must be nonnegative");
  OrthoBasis b;
  b.N = N;
  b.center = spec.centroid();
  b.scale = 0;
  for (const auto& pc : spec.boundary()) {
    if (pc.kind == BoundaryPiece::Kind::Circle) b.scale = std::max(b.scale, std::abs(pc.a - b.center) + pc.r);
    else b.scale = std::max({b.scale, std::abs(pc.a - b.center), std::abs(pc.b - b.center)});
  }
  bool laurent = std::holds_alternative<Annulus>(spec.variant());
  b.candidates.push_back(0);
  for (int k = 1; k <= N; ++k) {
    b.candidates.push_back(k);
    if (laurent) b.candidates.push_back(-k);
  }
  const std::size_t m = b.candidates.size();
  if (quad.size() < m) throw Error(Errc::BasisLargerThanQuadrature, "fewer quadrature nodes than monomials");
  b.domain_fp = spec.canonical();
  b.quad_fp = quad.fingerprint;

  // assemble G = V^T W conj(V) in blocks of nodes
  b.gram = Eigen::MatrixXcd::Zero(m, m);
  const std::size_t block = 4096;
  for (std::size_t s = 0; s < quad.size(); s += block) {
    std::size_t e = std::min(quad.size(), s + block);
    Eigen::MatrixXcd V(m, e - s);  // column per node
    Eigen::VectorXd w(e - s);
    std::vector<cplx> pos(N + 1), neg(N + 1);
    for (std::size_t i = s; i < e; ++i) {
      w[i - s] = quad.nodes[i].w;
      powers((quad.nodes[i].z - b.center) / b.scale, b.candidates, N, pos, neg, V.col(i - s).data());
    }
    b.gram.noalias() += V * (w.asDiagonal() * V.adjoint());
  }
  b.gram = 0.5 * (b.gram + b.gram.adjoint().eval());

  // Cholesky in degree order, dropping columns whose residual falls below thr * G_kk
  std::vector<std::size_t> sel;
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(m, m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t r = sel.size();
    Eigen::VectorXcd g(r);
    for (std::size_t i = 0; i < r; ++i) g[i] = b.gram(sel[i], k);
    Eigen::VectorXcd y = r ? Eigen::VectorXcd(L.topLeftCorner(r, r).triangularView<Eigen::Lower>().solve(g))
                           : Eigen::VectorXcd(0);
    double d = b.gram(k, k).real() - y.squaredNorm();
    b.pivots.push_back(d);
    if (k == 0 && !(d > 0)) throw Error(Errc::GramNotPD, "first pivot is not positive");
    if (!(d > thr * b.gram(k, k).real())) continue;
    for (std::size_t i = 0; i < r; ++i) L(r, i) = std::conj(y[i]);
    L(r, r) = std::sqrt(d);
    sel.push_back(k);
  }
  const std::size_t r = sel.size();
  for (auto k : sel) b.exponents.push_back(b.candidates[k]);
  Eigen::MatrixXcd Lr = L.topLeftCorner(r, r);
  b.factor = Lr.triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd::Identity(r, r));
  return b;
}

double orthonormality_defect(const OrthoBasis& b, const QuadratureRule& quad) {
  const std::size_t r = b.exponents.size();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(r, r);
  for (const auto& n : quad.nodes) {
    Eigen::VectorXcd p = b.phi(n.z);
    M.noalias() += n.w * (p * p.adjoint());
  }
  return (M - Eigen::MatrixXcd::Identity(r, r)).cwiseAbs().maxCoeff();
}

double bergman_metric(const OrthoBasis& b, cplx z) {
  Eigen::VectorXcd p = b.phi(z), dp = b.dphi(z);
  double A = p.squaredNorm(), C = dp.squaredNorm();
  cplx B = dp.dot(p);  // sum conj(dphi) phi
  if (!(A > 0)) throw Error(Errc::DegenerateKernel, "K(z,z) vanishes");
  return (A * C - std::norm(B)) / (A * A);
}

KernelValue kernel_exact(const DomainSpec& spec, cplx z, cplx w) {
  auto m = conformal_model(spec);
  if (!m) throw Error(Errc::UnsupportedSpec, "no closed-form kernel for " + spec.type_name());
  return kernel(ConformalKernel(m), z, w);
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::Diverged: return "diverged";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

LpScan lp_collar_scan(const PlanarKernel& k, cplx w, double p, const QuadratureRule& quad, const LpOptions& opt) {
  if (!(p >= 1)) throw Error(Errc::InvalidSpec, "p must be at least 1");
  LpScan s;
  s.p = p;
  const int K = opt.k_max;
  std::vector<double> S(K + 1, 0.0), St(K + 1, 0.0);
  std::vector<int> hits(K + 1, 0);
  auto col = k.column(w);
  const auto* ob = dynamic_cast<const OrthoBasis*>(&k);
  const int nt = ob ? std::max(0, ob->N - 5) : 0;
  for (const auto& n : quad.nodes) {
    int lev = std::min(collar_level(n.delta), K);
    double v = n.w * std::pow(std::abs(col(n.z)), p);
    S[lev] += v;
    ++hits[lev];
    s.total += v;
    if (ob) St[lev] += n.w * std::pow(std::abs(ob->K_truncated(n.z, w, nt)), p);
  }
  std::vector<int> usable;
  for (int lev = 1; lev < K; ++lev) {
    if (hits[lev] == 0 || !(S[lev] > 0)) continue;
    s.levels.push_back(lev);
    s.partial_sums.push_back(S[lev]);
    if (opt.min_width > 0 && std::ldexp(1.0, -lev) < opt.min_width) continue;
    if (ob && std::abs(S[lev] - St[lev]) > 0.01 * S[lev]) continue;
    usable.push_back(lev);
  }
  // last run of consecutive usable levels
  std::vector<int> run;
  for (int lev : usable) {
    if (!run.empty() && lev != run.back() + 1) run.clear();
    run.push_back(lev);
  }
  if (static_cast<int>(run.size()) < std::max(3, opt.fit_levels))
    throw Error(Errc::NoUsableCollars, "fewer than three consecutive usable collar levels");
  run.erase(run.begin(), run.end() - opt.fit_levels);
  s.fit_levels = run;
  std::vector<double> x, y;
  bool conv = true, div = true;
  for (std::size_t i = 0; i < run.size(); ++i) {
    x.push_back(run[i]);
    y.push_back(std::log2(S[run[i]]));
    if (i) {
      double r = S[run[i]] / S[run[i - 1]];
      s.ratios.push_back(r);
      conv = conv && r <= 0.9;
      div = div && r >= 1.1;
    }
  }
  s.verdict = conv ? Verdict::Converged : div ? Verdict::Diverged : Verdict::Inconclusive;
  s.tail_exponent = -fit_slope(x, y);
  return s;
}

double kp_lower(const PlanarKernel& k, cplx z, double p, const QuadratureRule& quad, const LpOptions& opt) {
  LpScan s = lp_collar_scan(k, z, p, quad, opt);
  if (s.verdict == Verdict::Diverged || !std::isfinite(s.total) || !(s.total > 0))
    throw Error(Errc::DivergentNorm, "K(., z) is not in L^p on this rule");
  return k.diag(z) / std::pow(s.total, 1.0 / p);
}

cplx Projection::operator()(cplx z) const { return basis->phi(z).cwiseProduct(coef).sum(); }

Projection projection(const OrthoBasis& b, const std::vector<cplx>& f, const QuadratureRule& quad) {
  if (f.size() != quad.size()) throw Error(Errc::InvalidSpec, "samples must align with quadrature nodes");
  Projection P;
  P.basis = &b;
  P.coef = Eigen::VectorXcd::Zero(b.effective_dim());
  for (std::size_t i = 0; i < quad.size(); ++i) P.coef += quad.nodes[i].w * f[i] * b.phi(quad.nodes[i].z).conjugate();
  return P;
}

cplx berezin(const PlanarKernel& k, const std::vector<cplx>& f, cplx z, const QuadratureRule& quad) {
  if (f.size() != quad.size()) throw Error(Errc::InvalidSpec, "samples must align with quadrature nodes");
  auto col = k.column(z);
  cplx s = 0;
  for (std::size_t i = 0; i < quad.size(); ++i) s += quad.nodes[i].w * f[i] * std::norm(col(quad.nodes[i].z));
  return s / k.diag(z);
}

}  // namespace blab
