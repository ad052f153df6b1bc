#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace blab {

using cplx = std::complex<double>;
using json = nlohmann::json;

struct Point2 {
  cplx z1;
  cplx z2;
};

class DomainSpec;

struct UnitDisc {};
struct Annulus {
  double r_inner = 0.5;
};
struct Polygon {
  std::vector<cplx> vertices;  // counterclockwise, simple
};
struct SlitDisc {};  // D minus [0,1)
struct Product {
  std::shared_ptr<const DomainSpec> left;
  std::shared_ptr<const DomainSpec> right;
};
struct ReinhardtEllipsoid {
  double a1 = 2.0;
  double a2 = 2.0;
};

struct BoundaryPiece {
  enum class Kind { Circle, Segment } kind;
  cplx a;        // circle center or segment start
  cplx b;        // segment end
  double r = 0;  // circle radius
};

class DomainSpec {
 public:
  using Variant = std::variant<UnitDisc, Annulus, Polygon, SlitDisc, Product, ReinhardtEllipsoid>;

  static DomainSpec unit_disc();
  static DomainSpec annulus(double r_inner);
  static DomainSpec polygon(std::vector<cplx> vertices);
  static DomainSpec square(double half_side = 1.0);
  static DomainSpec slit_disc();
  static DomainSpec product(const DomainSpec& left, const DomainSpec& right);
  static DomainSpec reinhardt(double a1, double a2);

  static DomainSpec from_json(const json& j);
  json to_json() const;
  std::string type_name() const;
  std::string canonical() const { return to_json().dump(); }

  const Variant& variant() const { return v_; }
  int dimension() const;

  bool contains(cplx z) const;
  bool contains(const Point2& z) const;
  // exact distance to the boundary; throws PointOutsideDomain outside
  double distance_to_boundary(cplx z) const;
  double distance_to_boundary(const Point2& z) const;
  // unchecked planar distance to the boundary set
  double boundary_distance_raw(cplx z) const;

  double diameter() const;
  std::pair<cplx, cplx> bbox() const;
  cplx centroid() const;
  double area() const;
  double perimeter() const;

  const std::vector<BoundaryPiece>& boundary() const { return pieces_; }
  // smallest t in (0, 1] with a + t(b - a) on the boundary
  std::optional<double> first_crossing(cplx a, cplx b) const;

 private:
  explicit DomainSpec(Variant v);
  void build_pieces();
  Variant v_;
  std::vector<BoundaryPiece> pieces_;
};

double reinhardt_distance(double a1, double a2, double r1, double r2);
double point_segment_distance(cplx z, cplx a, cplx b);

struct GridDomain {
  DomainSpec spec;
  double h = 0;
  cplx origin;  // lower-left corner of cell (0,0)
  cplx mid;     // center of the middle cell; centers sit at mid + h*(integer offsets)
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> mask;
  std::vector<double> delta;  // NaN where mask is false

  std::size_t size() const { return mask.size(); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  int col(std::size_t idx) const { return static_cast<int>(idx % nx); }
  int row(std::size_t idx) const { return static_cast<int>(idx / nx); }
  cplx center(int i, int j) const { return mid + cplx((i - nx / 2) * h, (j - ny / 2) * h); }
  cplx center(std::size_t idx) const { return center(col(idx), row(idx)); }
  bool inside(std::size_t idx) const { return mask[idx] != 0; }
  std::size_t count() const;
  // cell whose square contains z, if within the array
  std::optional<std::size_t> cell_of(cplx z) const;
  std::string fingerprint() const;
};

GridDomain rasterize(const DomainSpec& spec, double h);

struct Collar {
  int level = 0;
  std::vector<std::size_t> cells;
};

struct CollarPartition {
  Collar core;                 // delta > 1/2
  std::vector<Collar> collars; // level k = 1..k_max
  Collar remainder;            // delta <= 2^{-k_max-1}
};

CollarPartition collar_partition(const GridDomain& grid, int k_max);

// level k with 2^{-k-1} < d <= 2^{-k}; 0 for d > 1/2
int collar_level(double d);

}  // namespace blab
