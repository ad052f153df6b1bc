#include "blab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "blab/error.hpp"
#include "blab/hash.hpp"
#include "blab/io.hpp"

namespace blab {

namespace {

constexpr double kPi = std::numbers::pi;

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }
double dot(cplx a, cplx b) { return a.real() * b.real() + a.imag() * b.imag(); }

bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
  double d1 = cross(p2 - p1, q1 - p1), d2 = cross(p2 - p1, q2 - p1);
  double d3 = cross(q2 - q1, p1 - q1), d4 = cross(q2 - q1, p2 - q1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on = [](cplx a, cplx b, cplx c) {
    return std::abs(cross(b - a, c - a)) < 1e-14 && dot(c - a, c - b) <= 0;
  };
  return on(p1, p2, q1) || on(p1, p2, q2) || on(q1, q2, p1) || on(q1, q2, p2);
}

double signed_area(const std::vector<cplx>& v) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

void validate_polygon(const std::vector<cplx>& v) {
  if (v.size() < 3) throw Error(Errc::InvalidSpec, "polygon needs at least 3 vertices");
  for (auto z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(Errc::InvalidSpec, "polygon vertex not finite");
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
        throw Error(Errc::InvalidSpec, "polygon edges intersect");
    }
  if (signed_area(v) <= 0) throw Error(Errc::InvalidSpec, "polygon must be counterclockwise");
}

bool polygon_contains(const std::vector<cplx>& v, cplx z) {
  bool in = false;
  const std::size_t n = v.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    cplx a = v[i], b = v[j];
    if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
      double x = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (z.real() < x) in = !in;
    }
  }
  return in;
}

void circle_hits(cplx a, cplx d, cplx c, double r, std::vector<double>& out) {
  cplx p = a - c;
  double A = std::norm(d), B = 2 * dot(p, d), C = std::norm(p) - r * r;
  double disc = B * B - 4 * A * C;
  if (disc < 0) return;
  double s = std::sqrt(disc);
  // stable roots
  double q = -0.5 * (B + (B >= 0 ? s : -s));
  if (q != 0) {
    out.push_back(q / A);
    out.push_back(C / q);
  } else {
    out.push_back(0.0);
  }
}

void segment_hits(cplx a, cplx d, cplx p, cplx q, std::vector<double>& out) {
  cplx e = q - p;
  double den = cross(d, e);
  double scale = std::abs(d) * std::abs(e);
  if (std::abs(den) > 1e-14 * scale) {
    double t = cross(p - a, e) / den;
    double s = cross(p - a, d) / den;
    if (s >= -1e-12 && s <= 1 + 1e-12) out.push_back(t);
    return;
  }
  // parallel: only collinear overlap matters
  if (std::abs(cross(p - a, d)) > 1e-14 * std::abs(d) * std::max(1.0, std::abs(p - a))) return;
  double dd = std::norm(d);
  double tp = dot(p - a, d) / dd, tq = dot(q - a, d) / dd;
  double lo = std::min(tp, tq), hi = std::max(tp, tq);
  if (lo > 0) out.push_back(lo);
  else if (hi >= 0) out.push_back(0.0);
}

}  // namespace

double point_segment_distance(cplx z, cplx a, cplx b) {
  cplx e = b - a;
  double t = dot(z - a, e) / std::norm(e);
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (a + t * e));
}

DomainSpec::DomainSpec(Variant v) : v_(std::move(v)) { build_pieces(); }

DomainSpec DomainSpec::unit_disc() { return DomainSpec(UnitDisc{}); }

DomainSpec DomainSpec::annulus(double r_inner) {
  if (!(r_inner > 0 && r_inner < 1)) throw Error(Errc::InvalidSpec, "annulus needs 0 < r_inner < 1");
  return DomainSpec(Annulus{r_inner});
}

DomainSpec DomainSpec::polygon(std::vector<cplx> vertices) {
  validate_polygon(vertices);
  return DomainSpec(Polygon{std::move(vertices)});
}

DomainSpec DomainSpec::square(double s) {
  return polygon({cplx(-s, -s), cplx(s, -s), cplx(s, s), cplx(-s, s)});
}

DomainSpec DomainSpec::slit_disc() { return DomainSpec(SlitDisc{}); }

DomainSpec DomainSpec::product(const DomainSpec& l, const DomainSpec& r) {
  if (l.dimension() != 1 || r.dimension() != 1)
    throw Error(Errc::InvalidSpec, "product factors must be planar");
  return DomainSpec(Product{std::make_shared<const DomainSpec>(l), std::make_shared<const DomainSpec>(r)});
}

DomainSpec DomainSpec::reinhardt(double a1, double a2) {
  if (!(a1 > 0 && a2 > 0 && std::isfinite(a1) && std::isfinite(a2)))
    throw Error(Errc::InvalidSpec, "reinhardt exponents must be positive");
  return DomainSpec(ReinhardtEllipsoid{a1, a2});
}

DomainSpec DomainSpec::from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw Error(Errc::InvalidSpec, "domain spec must be an object with a string \"type\"");
  const std::string t = j["type"];
  try {
    if (t == "unit_disc") return unit_disc();
    if (t == "annulus") return annulus(j.at("r_inner").get<double>());
    if (t == "slit_disc") return slit_disc();
    if (t == "square") return square(j.value("half_side", 1.0));
    if (t == "polygon") {
      std::vector<cplx> v;
      for (const auto& p : j.at("vertices")) v.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      return polygon(std::move(v));
    }
    if (t == "product") return product(from_json(j.at("left")), from_json(j.at("right")));
    if (t == "reinhardt_ellipsoid") return reinhardt(j.at("a1").get<double>(), j.at("a2").get<double>());
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidSpec, std::string("bad parameters for ") + t + ": " + e.what());
  }
  throw Error(Errc::InvalidSpec, "unknown domain type " + t);
}

json DomainSpec::to_json() const {
  return std::visit(
      [](const auto& d) -> json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UnitDisc>) return {{"type", "unit_disc"}};
        else if constexpr (std::is_same_v<T, Annulus>) return {{"type", "annulus"}, {"r_inner", d.r_inner}};
        else if constexpr (std::is_same_v<T, SlitDisc>) return {{"type", "slit_disc"}};
        else if constexpr (std::is_same_v<T, Polygon>) {
          json vs = json::array();
          for (auto z : d.vertices) vs.push_back({z.real(), z.imag()});
          return {{"type", "polygon"}, {"vertices", vs}};
        } else if constexpr (std::is_same_v<T, Product>)
          return {{"type", "product"}, {"left", d.left->to_json()}, {"right", d.right->to_json()}};
        else
          return {{"type", "reinhardt_ellipsoid"}, {"a1", d.a1}, {"a2", d.a2}};
      },
      v_);
}

std::string DomainSpec::type_name() const { return to_json()["type"]; }

int DomainSpec::dimension() const {
  return (std::holds_alternative<Product>(v_) || std::holds_alternative<ReinhardtEllipsoid>(v_)) ? 2 : 1;
}

void DomainSpec::build_pieces() {
  pieces_.clear();
  using K = BoundaryPiece::Kind;
  if (std::holds_alternative<UnitDisc>(v_)) {
    pieces_.push_back({K::Circle, 0.0, 0.0, 1.0});
  } else if (auto* a = std::get_if<Annulus>(&v_)) {
    pieces_.push_back({K::Circle, 0.0, 0.0, 1.0});
    pieces_.push_back({K::Circle, 0.0, 0.0, a->r_inner});
  } else if (auto* p = std::get_if<Polygon>(&v_)) {
    const auto& v = p->vertices;
    for (std::size_t i = 0; i < v.size(); ++i) pieces_.push_back({K::Segment, v[i], v[(i + 1) % v.size()], 0});
  } else if (std::holds_alternative<SlitDisc>(v_)) {
    pieces_.push_back({K::Circle, 0.0, 0.0, 1.0});
    pieces_.push_back({K::Segment, 0.0, 1.0, 0});
  }
}

bool DomainSpec::contains(cplx z) const {
  if (auto* p = std::get_if<Polygon>(&v_)) {
    if (!polygon_contains(p->vertices, z)) return false;
    return boundary_distance_raw(z) > 0;
  }
  if (std::holds_alternative<UnitDisc>(v_)) return std::norm(z) < 1;
  if (auto* a = std::get_if<Annulus>(&v_)) {
    double r = std::abs(z);
    return r < 1 && r > a->r_inner;
  }
  if (std::holds_alternative<SlitDisc>(v_))
    return std::norm(z) < 1 && !(z.imag() == 0 && z.real() >= 0);
  throw Error(Errc::UnsupportedSpec, "planar point query on a domain in C^2");
}

bool DomainSpec::contains(const Point2& z) const {
  if (auto* p = std::get_if<Product>(&v_)) return p->left->contains(z.z1) && p->right->contains(z.z2);
  if (auto* r = std::get_if<ReinhardtEllipsoid>(&v_))
    return std::pow(std::abs(z.z1), r->a1) + std::pow(std::abs(z.z2), r->a2) < 1;
  throw Error(Errc::UnsupportedSpec, "C^2 point query on a planar domain");
}

double DomainSpec::boundary_distance_raw(cplx z) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pc : pieces_) {
    double d = pc.kind == BoundaryPiece::Kind::Circle ? std::abs(std::abs(z - pc.a) - pc.r)
                                                       : point_segment_distance(z, pc.a, pc.b);
    best = std::min(best, d);
  }
  return best;
}

double DomainSpec::distance_to_boundary(cplx z) const {
  if (!contains(z)) throw Error(Errc::PointOutsideDomain, "point is not interior");
  return boundary_distance_raw(z);
}

double reinhardt_distance(double a1, double a2, double r1, double r2) {
  // nearest boundary point shares the arguments of z, so work in (|z1|,|z2|)
  auto dist2 = [&](double t) {
    double x = std::pow(std::cos(t), 2.0 / a1), y = std::pow(std::sin(t), 2.0 / a2);
    return (x - r1) * (x - r1) + (y - r2) * (y - r2);
  };
  const int n = 2048;
  const double T = kPi / 2;
  int best = 0;
  double bv = dist2(0);
  for (int i = 1; i <= n; ++i) {
    double v = dist2(T * i / n);
    if (v < bv) bv = v, best = i;
  }
  double lo = T * std::max(0, best - 1) / n, hi = T * std::min(n, best + 1) / n;
  auto res = boost::math::tools::brent_find_minima(dist2, lo, hi, 52);
  return std::sqrt(std::min(bv, res.second));
}

double DomainSpec::distance_to_boundary(const Point2& z) const {
  if (!contains(z)) throw Error(Errc::PointOutsideDomain, "point is not interior");
  if (auto* p = std::get_if<Product>(&v_))
    return std::min(p->left->distance_to_boundary(z.z1), p->right->distance_to_boundary(z.z2));
  const auto& r = std::get<ReinhardtEllipsoid>(v_);
  return reinhardt_distance(r.a1, r.a2, std::abs(z.z1), std::abs(z.z2));
}

double DomainSpec::diameter() const {
  if (auto* p = std::get_if<Polygon>(&v_)) {
    double d = 0;
    for (auto a : p->vertices)
      for (auto b : p->vertices) d = std::max(d, std::abs(a - b));
    return d;
  }
  if (auto* p = std::get_if<Product>(&v_)) return std::hypot(p->left->diameter(), p->right->diameter());
  if (auto* r = std::get_if<ReinhardtEllipsoid>(&v_)) {
    double m = 0;
    for (int i = 0; i <= 4096; ++i) {
      double t = kPi / 2 * i / 4096;
      double x = std::pow(std::cos(t), 2.0 / r->a1), y = std::pow(std::sin(t), 2.0 / r->a2);
      m = std::max(m, std::hypot(x, y));
    }
    return 2 * m;
  }
  return 2.0;
}

std::pair<cplx, cplx> DomainSpec::bbox() const {
  if (auto* p = std::get_if<Polygon>(&v_)) {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (auto z : p->vertices) {
      x0 = std::min(x0, z.real()), y0 = std::min(y0, z.imag());
      x1 = std::max(x1, z.real()), y1 = std::max(y1, z.imag());
    }
    return {cplx(x0, y0), cplx(x1, y1)};
  }
  if (dimension() != 1) throw Error(Errc::UnsupportedSpec, "bbox of a domain in C^2");
  return {cplx(-1, -1), cplx(1, 1)};
}

double DomainSpec::area() const {
  if (auto* p = std::get_if<Polygon>(&v_)) return signed_area(p->vertices);
  if (auto* a = std::get_if<Annulus>(&v_)) return kPi * (1 - a->r_inner * a->r_inner);
  if (dimension() != 1) throw Error(Errc::UnsupportedSpec, "area of a domain in C^2");
  return kPi;
}

double DomainSpec::perimeter() const {
  double s = 0;
  for (const auto& pc : pieces_)
    s += pc.kind == BoundaryPiece::Kind::Circle ? 2 * kPi * pc.r : 2 * std::abs(pc.b - pc.a);
  if (std::holds_alternative<Polygon>(v_)) s *= 0.5;  // polygon edges are one-sided
  return s;
}

cplx DomainSpec::centroid() const {
  if (auto* p = std::get_if<Polygon>(&v_)) {
    const auto& v = p->vertices;
    cplx c = 0;
    double a = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      cplx p0 = v[i], p1 = v[(i + 1) % v.size()];
      double w = cross(p0, p1);
      a += w;
      c += (p0 + p1) * w;
    }
    return c / (3 * a);
  }
  if (dimension() != 1) throw Error(Errc::UnsupportedSpec, "centroid of a domain in C^2");
  return 0.0;
}

std::optional<double> DomainSpec::first_crossing(cplx a, cplx b) const {
  std::vector<double> ts;
  cplx d = b - a;
  for (const auto& pc : pieces_) {
    if (pc.kind == BoundaryPiece::Kind::Circle) circle_hits(a, d, pc.a, pc.r, ts);
    else segment_hits(a, d, pc.a, pc.b, ts);
  }
  std::optional<double> best;
  for (double t : ts)
    if (t > 1e-12 && t <= 1 + 1e-9 && (!best || t < *best)) best = std::min(t, 1.0);
  return best;
}

std::size_t GridDomain::count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

std::optional<std::size_t> GridDomain::cell_of(cplx z) const {
  double fx = (z.real() - origin.real()) / h, fy = (z.imag() - origin.imag()) / h;
  if (fx < 0 || fy < 0) return std::nullopt;
  int i = static_cast<int>(fx), j = static_cast<int>(fy);
  if (i >= nx || j >= ny) return std::nullopt;
  return index(i, j);
}

std::string GridDomain::fingerprint() const {
  return hex64(fnv1a64(spec.canonical() + "|h=" + fmt17(h)));
}

GridDomain rasterize(const DomainSpec& spec, double h) {
  if (!(h > 0) || !std::isfinite(h)) throw Error(Errc::NonPositiveSpacing, "h must be positive");
  if (spec.dimension() != 1)
    throw Error(Errc::UnsupportedSpec, "domains in C^2 are handled through closed forms only");
  if (h > spec.diameter() / 8) throw Error(Errc::InvalidSpec, "h must not exceed diameter/8");
  auto [lo, hi] = spec.bbox();
  cplx c = 0.5 * (lo + hi);
  int mx = static_cast<int>(std::ceil(0.5 * (hi.real() - lo.real()) / h)) + 1;
  int my = static_cast<int>(std::ceil(0.5 * (hi.imag() - lo.imag()) / h)) + 1;
  GridDomain g{spec, h, c - cplx((mx + 0.5) * h, (my + 0.5) * h), c, 2 * mx + 1, 2 * my + 1, {}, {}};
  const std::size_t cells = static_cast<std::size_t>(g.nx) * g.ny;
  g.mask.assign(cells, 0);
  g.delta.assign(cells, std::numeric_limits<double>::quiet_NaN());
  bool any = false;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      cplx z = g.center(i, j);
      if (!spec.contains(z)) continue;
      std::size_t k = g.index(i, j);
      g.mask[k] = 1;
      g.delta[k] = spec.boundary_distance_raw(z);
      any = true;
    }
  if (!any) throw Error(Errc::EmptyRasterization, "no cell center lies inside the domain");
  return g;
}

int collar_level(double d) {
  if (d > 0.5) return 0;
  int e;
  double m = std::frexp(d, &e);
  return m == 0.5 ? 1 - e : -e;
}

CollarPartition collar_partition(const GridDomain& grid, int k_max) {
  if (k_max < 1) throw Error(Errc::InvalidSpec, "k_max must be at least 1");
  CollarPartition p;
  p.core.level = 0;
  p.remainder.level = k_max + 1;
  for (int k = 1; k <= k_max; ++k) p.collars.push_back(Collar{k, {}});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.inside(i)) continue;
    int k = collar_level(grid.delta[i]);
    if (k == 0) p.core.cells.push_back(i);
    else if (k <= k_max) p.collars[k - 1].cells.push_back(i);
    else p.remainder.cells.push_back(i);
  }
  return p;
}

}  // namespace blab
