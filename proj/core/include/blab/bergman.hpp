#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blab/conformal.hpp"
#include "blab/geometry.hpp"
#include "blab/quadrature.hpp"

namespace blab {

struct KernelValue {
  cplx K_zw;
  double K_z = 0;
  double K_w = 0;
  double B = 0;  // |K(z,w)|^2 / (K(z) K(w))
};

class PlanarKernel {
 public:
  virtual ~PlanarKernel() = default;
  virtual cplx K(cplx z, cplx w) const = 0;
  virtual double diag(cplx z) const = 0;
  virtual double metric(cplx z) const = 0;
  virtual std::string source() const = 0;
  // z -> K(z, w) with any w-dependent work done once
  virtual std::function<cplx(cplx)> column(cplx w) const;
};

KernelValue kernel(const PlanarKernel& k, cplx z, cplx w);

class OrthoBasis final : public PlanarKernel {
 public:
  int N = 0;
  cplx center;
  double scale = 1;
  std::vector<int> candidates;  // monomial exponents offered, ordered by |k|
  std::vector<int> exponents;   // accepted exponents, same order
  std::vector<double> pivots;   // residual diagonal per candidate (pivot log)
  Eigen::MatrixXcd gram;        // inner products of all candidates
  Eigen::MatrixXcd factor;      // phi = factor * m(accepted), lower triangular
  std::string domain_fp;
  std::string quad_fp;

  int effective_dim() const { return static_cast<int>(exponents.size()); }
  Eigen::VectorXcd phi(cplx z) const;
  Eigen::VectorXcd dphi(cplx z) const;
  // kernel from the orthonormal functions whose monomial degree is <= n
  cplx K_truncated(cplx z, cplx w, int n) const;

  cplx K(cplx z, cplx w) const override;
  double diag(cplx z) const override;
  double metric(cplx z) const override;
  std::string source() const override { return "gram"; }
  std::function<cplx(cplx)> column(cplx w) const override;

 private:
  Eigen::VectorXcd monomials(cplx z) const;
};

// Gram of centered, scaled monomials (Laurent for annuli) and its drop-threshold Cholesky
OrthoBasis gram(const QuadratureRule& quad, int N, const DomainSpec& spec, double pivot_threshold = 1e-13);
// max |<phi_j, phi_k> - delta_jk| re-integrated with the rule
double orthonormality_defect(const OrthoBasis& b, const QuadratureRule& quad);

class ConformalKernel final : public PlanarKernel {
 public:
  explicit ConformalKernel(std::shared_ptr<const ConformalModel> m) : m_(std::move(m)) {}
  cplx K(cplx z, cplx w) const override { return m_->kernel(z, w); }
  double diag(cplx z) const override { return m_->kernel_diag(z); }
  double metric(cplx z) const override { return m_->metric(z); }
  std::string source() const override { return "conformal"; }
  const ConformalModel& model() const { return *m_; }

 private:
  std::shared_ptr<const ConformalModel> m_;
};

// closed forms: unit disc (and the slit disc by transport), products, Reinhardt ellipsoids
KernelValue kernel_exact(const DomainSpec& spec, cplx z, cplx w);
KernelValue kernel_exact(const DomainSpec& spec, const Point2& z, const Point2& w);

// Reinhardt ellipsoid {|z1|^a1 + |z2|^a2 < 1}: diagonal monomial Gram
class ReinhardtBasis {
 public:
  double a1 = 2, a2 = 2;
  int N = 0;
  std::vector<std::pair<int, int>> exponents;
  std::vector<double> norms2;  // ||z1^j z2^k||^2

  cplx K(const Point2& z, const Point2& w) const;
};
double reinhardt_norm2_exact(double a1, double a2, int j, int k);
// norms from a 2-D radial quadrature; off-diagonal entries vanish by rotation symmetry
ReinhardtBasis reinhardt_gram(double a1, double a2, int N);

enum class Verdict { Converged, Diverged, Inconclusive };
const char* verdict_name(Verdict v);

struct LpScan {
  double p = 2;
  std::vector<int> levels;            // collar levels with data
  std::vector<double> partial_sums;   // S_k per entry of levels
  std::vector<int> fit_levels;        // last usable levels
  std::vector<double> ratios;         // S_{k+1}/S_k over fit_levels
  Verdict verdict = Verdict::Inconclusive;
  double tail_exponent = 0;
  double total = 0;                   // sum over all nodes of w |K|^p
};

struct LpOptions {
  double min_width = 0;  // usable levels need 2^{-k} >= min_width
  int fit_levels = 3;
  int k_max = 30;
};

LpScan lp_collar_scan(const PlanarKernel& k, cplx w, double p, const QuadratureRule& quad, const LpOptions& opt);

// K(z) / ||K(., z)||_p : certified lower bound for the L^p kernel
double kp_lower(const PlanarKernel& k, cplx z, double p, const QuadratureRule& quad, const LpOptions& opt);

struct Projection {
  Eigen::VectorXcd coef;
  const OrthoBasis* basis = nullptr;
  cplx operator()(cplx z) const;
};
Projection projection(const OrthoBasis& b, const std::vector<cplx>& f_at_nodes, const QuadratureRule& quad);

cplx berezin(const PlanarKernel& k, const std::vector<cplx>& f_at_nodes, cplx z, const QuadratureRule& quad);

double bergman_metric(const OrthoBasis& b, cplx z);

// shortest paths on the 8-neighbour graph of masked cells
struct GeodesicField {
  std::shared_ptr<const GridDomain> grid;
  std::size_t source = 0;
  std::vector<double> dist;
  double to(cplx z) const;  // distance to the cell containing z; throws Disconnected
};

GeodesicField geodesic_from(std::shared_ptr<const GridDomain> grid, cplx z0,
                            const std::function<double(cplx, double)>& edge_weight);
GeodesicField bergman_geodesics(std::shared_ptr<const GridDomain> grid, cplx z0,
                                const std::function<double(cplx)>& metric);
GeodesicField kobayashi_geodesics(std::shared_ptr<const GridDomain> grid, cplx z0);

struct Distances {
  double d_B_upper = 0;
  double d_S = 0;
  double D_B = 0;
  double d_K_upper = 0;
};

Distances distances(const std::function<double(cplx)>& metric, const PlanarKernel& k,
                    std::shared_ptr<const GridDomain> grid, cplx z0, cplx z1);

}  // namespace blab
