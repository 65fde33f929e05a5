#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <array>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace swarmcov::geom {

using Vec2 = Eigen::Vector2d;

// Coincidence tolerance for boolean operations and boundary membership, in meters.
inline constexpr double kEps = 1e-9;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Simple polygon, counterclockwise. Construction normalizes orientation and
// rejects degenerate or self-intersecting rings.
class Polygon {
 public:
  explicit Polygon(Eigen::Matrix2Xd vertices);
  explicit Polygon(const std::vector<Vec2>& vertices);

  const Eigen::Matrix2Xd& vertices() const { return verts_; }
  int size() const { return static_cast<int>(verts_.cols()); }
  Vec2 vertex(int i) const { return verts_.col(i); }
  double area() const { return area_; }
  const Eigen::AlignedBox2d& bounding_box() const { return bbox_; }

  Polygon translated(const Vec2& offset) const;

 private:
  struct Unchecked {};
  Polygon(Eigen::Matrix2Xd vertices, Unchecked);

  Eigen::Matrix2Xd verts_;
  double area_ = 0.0;
  Eigen::AlignedBox2d bbox_;

  friend Polygon make_regular_polygon(const Vec2&, double, int);
};

// Regular n-gon inscribed in the circle of the given radius, vertex 0 at angle 0
// (mirror-symmetric about the horizontal axis through the center).
Polygon make_regular_polygon(const Vec2& center, double radius, int n_edges);

// An agent's sensory footprint: the inscribed regular n-gon plus its parameters.
struct CoveragePolygon {
  Vec2 center;
  double radius;
  int n_edges;
  Polygon polygon;
};

CoveragePolygon make_coverage_polygon(const Vec2& center, double radius, int n_edges = 30);

struct AnalyticDisk {
  Vec2 center;
  double radius;
};

// Target region: a free-shape polygon in the general case; the analytic disk
// variant exists to reproduce the quadratic signed function x^2 + y^2 - r^2.
class Region {
 public:
  explicit Region(Polygon poly);
  Region(const Vec2& disk_center, double disk_radius, int polygonize_edges = 256);

  bool is_disk() const { return disk_.has_value(); }
  const AnalyticDisk& disk() const { return *disk_; }
  // Polygonal variant returns the ring itself; the disk variant returns its
  // fixed high-resolution polygonization (used by polygon-only operations).
  const Polygon& polygon() const { return poly_; }
  double area() const;

 private:
  Polygon poly_;
  std::optional<AnalyticDisk> disk_;
};

double polygon_area(const Polygon& p);

// Closed-set convention: boundary points count as inside.
bool point_in_polygon(const Vec2& q, const Polygon& p);

// 0 for interior/boundary points, else Euclidean distance to the nearest
// boundary point.
double distance_to_polygon(const Vec2& q, const Polygon& p);

// Distance to the boundary regardless of which side q is on.
double distance_to_boundary(const Vec2& q, const Polygon& p);

double intersection_area(const Polygon& a, const Polygon& b);

double union_area(std::span<const Polygon> polys);
double union_area(std::initializer_list<Polygon> polys);

// area((p1 u ... u pn) n clip)
double union_area_clipped(std::span<const Polygon> polys, const Polygon& clip);

// Rasterization fallback for pathological inputs; cell edge is cell_rel times
// the bounding-box diagonal.
double union_area_grid(std::span<const Polygon> polys, double cell_rel = 1e-3);

// Directed boundary segments of the merged union, for rendering.
std::vector<std::array<Vec2, 2>> union_boundary(std::span<const Polygon> polys);

// Negative inside, zero on the boundary, increasing outside. The disk variant
// is quadratic; the polygonal variant is the signed Euclidean boundary distance.
double signed_region_value(const Vec2& q, const Region& reg);

bool point_in_region(const Vec2& q, const Region& reg);

// 0 inside/on; else distance to the region boundary.
double distance_to_region(const Vec2& q, const Region& reg);

}  // namespace swarmcov::geom
