#include <cmath>
#include <limits>
#include <queue>

#include "blab/bergman.hpp"
#include "blab/error.hpp"

namespace blab {

double GeodesicField::to(cplx z) const {
  auto c = grid->cell_of(z);
  if (!c || !grid->inside(*c)) throw Error(Errc::PointOutsideDomain, "target is not a masked cell");
  double d = dist[*c];
  if (!std::isfinite(d)) throw Error(Errc::Disconnected, "target unreachable through the mask");
  return d;
}

GeodesicField geodesic_from(std::shared_ptr<const GridDomain> grid, cplx z0,
                            const std::function<double(cplx, double)>& edge_weight) {
  const GridDomain& g = *grid;
  auto src = g.cell_of(z0);
  if (!src || !g.inside(*src)) throw Error(Errc::PointOutsideDomain, "source is not a masked cell");
  GeodesicField f{grid, *src, std::vector<double>(g.size(), std::numeric_limits<double>::infinity())};
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  f.dist[*src] = 0;
  pq.push({0, *src});
  const int di[8] = {1, -1, 0, 0, 1, 1, -1, -1}, dj[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  while (!pq.empty()) {
    auto [d, p] = pq.top();
    pq.pop();
    if (d > f.dist[p]) continue;
    int i = g.col(p), j = g.row(p);
    cplx zp = g.center(i, j);
    for (int a = 0; a < 8; ++a) {
      int ii = i + di[a], jj = j + dj[a];
      if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny) continue;
      std::size_t q = g.index(ii, jj);
      if (!g.inside(q)) continue;
      cplx zq = g.center(ii, jj);
      // an edge may not jump across a slit or a thin boundary feature
      if (std::min(g.delta[p], g.delta[q]) < 1.5 * g.h) {
        auto t = g.spec.first_crossing(zp, zq);
        if (t && *t < 1) continue;
      }
      double len = std::abs(zq - zp);
      double nd = d + edge_weight(0.5 * (zp + zq), len);
      if (nd < f.dist[q]) {
        f.dist[q] = nd;
        pq.push({nd, q});
      }
    }
  }
  return f;
}

GeodesicField bergman_geodesics(std::shared_ptr<const GridDomain> grid, cplx z0,
                                const std::function<double(cplx)>& metric) {
  return geodesic_from(std::move(grid), z0, [&](cplx m, double len) { return std::sqrt(metric(m)) * len; });
}

GeodesicField kobayashi_geodesics(std::shared_ptr<const GridDomain> grid, cplx z0) {
  const DomainSpec spec = grid->spec;
  return geodesic_from(std::move(grid), z0,
                       [spec](cplx m, double len) { return len / spec.boundary_distance_raw(m); });
}

Distances distances(const std::function<double(cplx)>& metric, const PlanarKernel& k,
                    std::shared_ptr<const GridDomain> grid, cplx z0, cplx z1) {
  Distances d;
  d.d_B_upper = bergman_geodesics(grid, z0, metric).to(z1);
  d.d_K_upper = kobayashi_geodesics(grid, z0).to(z1);
  KernelValue v = kernel(k, z0, z1);
  double B = std::min(v.B, 1.0);
  d.d_S = std::sqrt(std::max(0.0, 1 - std::sqrt(B)));
  d.D_B = -std::log(B);
  return d;
}

}  // namespace blab
