#include "swarmcov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace swarmcov::geom {

namespace {

constexpr double kVertexEps = 1e-12;  // consecutive-vertex coincidence tolerance

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area_of(const Eigen::Matrix2Xd& v) {
  const int n = static_cast<int>(v.cols());
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += cross2(v.col(i), v.col((i + 1) % n));
  }
  return 0.5 * acc;
}

Eigen::AlignedBox2d bbox_of(const Eigen::Matrix2Xd& v) {
  Eigen::AlignedBox2d box;
  for (int i = 0; i < v.cols(); ++i) box.extend(v.col(i));
  return box;
}

double point_segment_distance(const Vec2& q, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (q - a).norm();
  const double t = std::clamp((q - a).dot(ab) / len2, 0.0, 1.0);
  return (q - (a + t * ab)).norm();
}

// Appends parameter values t in [0,1] along (a0,a1) where it meets (b0,b1):
// a proper crossing contributes one value, a collinear overlap its two endpoints.
void collect_intersection_params(const Vec2& a0, const Vec2& a1, const Vec2& b0,
                                 const Vec2& b1, double eps, std::vector<double>& out) {
  const Vec2 r = a1 - a0;
  const Vec2 s = b1 - b0;
  const double rlen = r.norm();
  const double slen = s.norm();
  if (rlen <= eps || slen <= eps) return;
  const Vec2 qp = b0 - a0;
  const double denom = cross2(r, s);
  if (std::abs(denom) > eps * rlen * slen) {
    const double t = cross2(qp, s) / denom;
    const double u = cross2(qp, r) / denom;
    const double t_eps = eps / rlen;
    const double u_eps = eps / slen;
    if (t >= -t_eps && t <= 1.0 + t_eps && u >= -u_eps && u <= 1.0 + u_eps) {
      out.push_back(std::clamp(t, 0.0, 1.0));
    }
  } else if (std::abs(cross2(qp, r)) <= eps * rlen) {
    // parallel and on the same line: overlap interval endpoints
    const double inv = 1.0 / (rlen * rlen);
    double t0 = qp.dot(r) * inv;
    double t1 = (b1 - a0).dot(r) * inv;
    if (t0 > t1) std::swap(t0, t1);
    if (t1 < 0.0 || t0 > 1.0) return;
    out.push_back(std::clamp(t0, 0.0, 1.0));
    out.push_back(std::clamp(t1, 0.0, 1.0));
  }
}

bool segments_touch(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1,
                    double eps) {
  std::vector<double> ts;
  collect_intersection_params(a0, a1, b0, b1, eps, ts);
  return !ts.empty();
}

enum class Side { Inside, Outside, Boundary };

// Working copy used by the boolean-area kernel: vertices pre-translated toward
// the origin for conditioning.
struct WorkPoly {
  Eigen::Matrix2Xd v;
  Eigen::AlignedBox2d bb;
};

Side classify_point(const Vec2& q, const Eigen::Matrix2Xd& v,
                    const Eigen::AlignedBox2d& bb, double eps) {
  if (q.x() < bb.min().x() - eps || q.x() > bb.max().x() + eps ||
      q.y() < bb.min().y() - eps || q.y() > bb.max().y() + eps) {
    return Side::Outside;
  }
  const int n = static_cast<int>(v.cols());
  for (int i = 0; i < n; ++i) {
    if (point_segment_distance(q, v.col(i), v.col((i + 1) % n)) <= eps) {
      return Side::Boundary;
    }
  }
  // half-open crossing rule keeps vertex hits consistent
  bool inside = false;
  for (int i = 0; i < n; ++i) {
    const Vec2 a = v.col(i);
    const Vec2 b = v.col((i + 1) % n);
    const bool a_above = a.y() > q.y();
    const bool b_above = b.y() > q.y();
    if (a_above != b_above) {
      const double x_int = a.x() + (q.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (x_int > q.x()) inside = !inside;
    }
  }
  return inside ? Side::Inside : Side::Outside;
}

struct SubEdge {
  Vec2 a;
  Vec2 b;
  int poly;
};

// Splits every edge of every polygon at its contact points with all other
// polygons' edges. Sub-edge interiors afterwards cross no other boundary.
std::vector<SubEdge> split_all_edges(const std::vector<WorkPoly>& polys) {
  std::vector<SubEdge> out;
  std::vector<double> ts;
  for (std::size_t pi = 0; pi < polys.size(); ++pi) {
    const auto& v = polys[pi].v;
    const int n = static_cast<int>(v.cols());
    for (int e = 0; e < n; ++e) {
      const Vec2 a = v.col(e);
      const Vec2 b = v.col((e + 1) % n);
      const double len = (b - a).norm();
      if (len <= kEps) continue;
      ts.clear();
      ts.push_back(0.0);
      ts.push_back(1.0);
      Eigen::AlignedBox2d ebb;
      ebb.extend(a);
      ebb.extend(b);
      for (std::size_t pj = 0; pj < polys.size(); ++pj) {
        if (pj == pi) continue;
        if (ebb.exteriorDistance(polys[pj].bb) > kEps) continue;
        const auto& w = polys[pj].v;
        const int m = static_cast<int>(w.cols());
        for (int f = 0; f < m; ++f) {
          collect_intersection_params(a, b, w.col(f), w.col((f + 1) % m), kEps, ts);
        }
      }
      std::sort(ts.begin(), ts.end());
      const double t_eps = kEps / len;
      double t_prev = 0.0;
      for (double t : ts) {
        if (t - t_prev <= t_eps) continue;
        t = std::min(t, 1.0);
        out.push_back(SubEdge{a + t_prev * (b - a), a + t * (b - a), static_cast<int>(pi)});
        t_prev = t;
      }
    }
  }
  return out;
}

struct CoincidentEdge {
  int poly;
  bool same_direction;
};

// Nearest-edge coincidence probe for a midpoint already classified Boundary.
CoincidentEdge coincidence(const SubEdge& e, const Vec2& mid, int pj, const WorkPoly& other) {
  const auto& w = other.v;
  const int m = static_cast<int>(w.cols());
  double best = std::numeric_limits<double>::infinity();
  int best_f = 0;
  for (int f = 0; f < m; ++f) {
    const double d = point_segment_distance(mid, w.col(f), w.col((f + 1) % m));
    if (d < best) {
      best = d;
      best_f = f;
    }
  }
  const Vec2 de = e.b - e.a;
  const Vec2 df = w.col((best_f + 1) % m) - w.col(best_f);
  const bool collinear = std::abs(cross2(de, df)) <= 1e-7 * de.norm() * df.norm();
  if (!collinear) return CoincidentEdge{pj, false};  // transversal graze, never deduped
  return CoincidentEdge{pj, de.dot(df) > 0.0};
}

std::vector<WorkPoly> make_work_polys(std::span<const Polygon> polys, Vec2* offset_out) {
  Eigen::AlignedBox2d all;
  for (const auto& p : polys) all.extend(p.bounding_box());
  const Vec2 offset = polys.empty() ? Vec2::Zero() : Vec2(all.center());
  std::vector<WorkPoly> work;
  work.reserve(polys.size());
  for (const auto& p : polys) {
    WorkPoly wp;
    wp.v = p.vertices().colwise() - offset;
    wp.bb = bbox_of(wp.v);
    work.push_back(std::move(wp));
  }
  if (offset_out) *offset_out = offset;
  return work;
}

double green_sum(const std::vector<SubEdge>& edges, const std::vector<bool>& keep) {
  double acc = 0.0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (keep[k]) acc += cross2(edges[k].a, edges[k].b);
  }
  return 0.5 * acc;
}

// Union boundary: a sub-edge survives when its midpoint is strictly inside no
// other polygon, except that same-direction coincident copies keep only the
// lowest polygon index (opposite-direction copies cancel in the Green sum).
std::vector<bool> retain_union(const std::vector<WorkPoly>& polys,
                               const std::vector<SubEdge>& edges) {
  std::vector<bool> keep(edges.size(), false);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const SubEdge& e = edges[k];
    const Vec2 mid = 0.5 * (e.a + e.b);
    bool retained = true;
    for (std::size_t pj = 0; pj < polys.size() && retained; ++pj) {
      if (static_cast<int>(pj) == e.poly) continue;
      const Side s = classify_point(mid, polys[pj].v, polys[pj].bb, kEps);
      if (s == Side::Inside) {
        retained = false;
      } else if (s == Side::Boundary) {
        const CoincidentEdge c = coincidence(e, mid, static_cast<int>(pj), polys[pj]);
        if (c.same_direction && c.poly < e.poly) retained = false;
      }
    }
    keep[k] = retained;
  }
  return keep;
}

// Intersection boundary of a pair: A-edges survive inside or on B; B-edges
// survive strictly inside A, or on A's boundary when anti-parallel (the pair
// then cancels, which is the correct zero-width contribution).
std::vector<bool> retain_intersection(const std::vector<WorkPoly>& polys,
                                      const std::vector<SubEdge>& edges) {
  std::vector<bool> keep(edges.size(), false);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const SubEdge& e = edges[k];
    const Vec2 mid = 0.5 * (e.a + e.b);
    const int other = 1 - e.poly;
    const Side s = classify_point(mid, polys[other].v, polys[other].bb, kEps);
    if (e.poly == 0) {
      keep[k] = s != Side::Outside;
    } else {
      if (s == Side::Inside) {
        keep[k] = true;
      } else if (s == Side::Boundary) {
        keep[k] = !coincidence(e, mid, other, polys[other]).same_direction;
      }
    }
  }
  return keep;
}

}  // namespace

Polygon::Polygon(Eigen::Matrix2Xd vertices, Unchecked) : verts_(std::move(vertices)) {
  const double sa = signed_area_of(verts_);
  if (sa < 0.0) verts_ = verts_.rowwise().reverse().eval();
  area_ = std::abs(sa);
  bbox_ = bbox_of(verts_);
}

Polygon::Polygon(Eigen::Matrix2Xd vertices) : verts_(std::move(vertices)) {
  const int n = static_cast<int>(verts_.cols());
  if (n < 3) throw GeometryError("degenerate ring: fewer than 3 vertices");
  for (int i = 0; i < n; ++i) {
    if ((verts_.col(i) - verts_.col((i + 1) % n)).norm() <= kVertexEps) {
      throw GeometryError("degenerate ring: repeated consecutive vertex");
    }
  }
  const double sa = signed_area_of(verts_);
  if (std::abs(sa) <= kVertexEps) throw GeometryError("degenerate ring: zero area");
  if (sa < 0.0) verts_ = verts_.rowwise().reverse().eval();

  // simplicity: non-adjacent edges must not touch, adjacent edges must not fold back
  for (int i = 0; i < n; ++i) {
    const Vec2 a0 = verts_.col(i);
    const Vec2 a1 = verts_.col((i + 1) % n);
    const Vec2 next = verts_.col((i + 2) % n);
    const Vec2 d0 = a1 - a0;
    const Vec2 d1 = next - a1;
    if (std::abs(cross2(d0, d1)) <= kVertexEps * d0.norm() * d1.norm() &&
        d0.dot(d1) < 0.0) {
      throw GeometryError("self-intersecting ring: fold-back spike");
    }
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_touch(a0, a1, verts_.col(j), verts_.col((j + 1) % n), kVertexEps)) {
        throw GeometryError("self-intersecting ring: edges cross");
      }
    }
  }
  area_ = std::abs(sa);
  bbox_ = bbox_of(verts_);
}

Polygon::Polygon(const std::vector<Vec2>& vertices)
    : Polygon([&] {
        Eigen::Matrix2Xd m(2, vertices.size());
        for (std::size_t i = 0; i < vertices.size(); ++i) m.col(i) = vertices[i];
        return m;
      }()) {}

Polygon Polygon::translated(const Vec2& offset) const {
  return Polygon(verts_.colwise() + offset, Unchecked{});
}

Polygon make_regular_polygon(const Vec2& center, double radius, int n_edges) {
  if (radius <= 0.0) throw GeometryError("regular polygon: radius must be > 0");
  if (n_edges < 3) throw GeometryError("regular polygon: need at least 3 edges");
  Eigen::Matrix2Xd v(2, n_edges);
  for (int k = 0; k < n_edges; ++k) {
    const double ang = 2.0 * std::numbers::pi * k / n_edges;
    v.col(k) = center + radius * Vec2(std::cos(ang), std::sin(ang));
  }
  return Polygon(std::move(v), Polygon::Unchecked{});
}

CoveragePolygon make_coverage_polygon(const Vec2& center, double radius, int n_edges) {
  return CoveragePolygon{center, radius, n_edges,
                         make_regular_polygon(center, radius, n_edges)};
}

Region::Region(Polygon poly) : poly_(std::move(poly)) {}

Region::Region(const Vec2& disk_center, double disk_radius, int polygonize_edges)
    : poly_(make_regular_polygon(disk_center, disk_radius, polygonize_edges)),
      disk_(AnalyticDisk{disk_center, disk_radius}) {}

double Region::area() const {
  if (disk_) return std::numbers::pi * disk_->radius * disk_->radius;
  return poly_.area();
}

double polygon_area(const Polygon& p) { return p.area(); }

bool point_in_polygon(const Vec2& q, const Polygon& p) {
  return classify_point(q, p.vertices(), p.bounding_box(), kEps) != Side::Outside;
}

double distance_to_boundary(const Vec2& q, const Polygon& p) {
  const auto& v = p.vertices();
  const int n = p.size();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(q, v.col(i), v.col((i + 1) % n)));
  }
  return best;
}

double distance_to_polygon(const Vec2& q, const Polygon& p) {
  if (point_in_polygon(q, p)) return 0.0;
  return distance_to_boundary(q, p);
}

double intersection_area(const Polygon& a, const Polygon& b) {
  if (a.bounding_box().exteriorDistance(b.bounding_box()) > kEps) return 0.0;
  const Polygon pair[] = {a, b};
  auto work = make_work_polys(std::span<const Polygon>(pair, 2), nullptr);
  const auto edges = split_all_edges(work);
  return green_sum(edges, retain_intersection(work, edges));
}

double union_area(std::span<const Polygon> polys) {
  if (polys.empty()) return 0.0;
  if (polys.size() == 1) return polys[0].area();
  auto work = make_work_polys(polys, nullptr);
  const auto edges = split_all_edges(work);
  return green_sum(edges, retain_union(work, edges));
}

double union_area(std::initializer_list<Polygon> polys) {
  return union_area(std::span<const Polygon>(polys.begin(), polys.size()));
}

double union_area_clipped(std::span<const Polygon> polys, const Polygon& clip) {
  if (polys.empty()) return 0.0;
  std::vector<Polygon> with_clip(polys.begin(), polys.end());
  with_clip.push_back(clip);
  // area((U P) n C) = area(U P) + area(C) - area(U P u C)
  return union_area(polys) + clip.area() - union_area(with_clip);
}

double union_area_grid(std::span<const Polygon> polys, double cell_rel) {
  if (polys.empty()) return 0.0;
  Eigen::AlignedBox2d all;
  for (const auto& p : polys) all.extend(p.bounding_box());
  const double cell = cell_rel * all.diagonal().norm();
  if (cell <= 0.0) return 0.0;
  const int nx = std::max(1, static_cast<int>(std::ceil(all.sizes().x() / cell)));
  const int ny = std::max(1, static_cast<int>(std::ceil(all.sizes().y() / cell)));
  long hits = 0;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const Vec2 q = all.min() + Vec2((ix + 0.5) * cell, (iy + 0.5) * cell);
      for (const auto& p : polys) {
        if (point_in_polygon(q, p)) {
          ++hits;
          break;
        }
      }
    }
  }
  return static_cast<double>(hits) * cell * cell;
}

std::vector<std::array<Vec2, 2>> union_boundary(std::span<const Polygon> polys) {
  std::vector<std::array<Vec2, 2>> out;
  if (polys.empty()) return out;
  Vec2 offset;
  auto work = make_work_polys(polys, &offset);
  const auto edges = split_all_edges(work);
  const auto keep = retain_union(work, edges);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (keep[k]) out.push_back({edges[k].a + offset, edges[k].b + offset});
  }
  return out;
}

double signed_region_value(const Vec2& q, const Region& reg) {
  if (reg.is_disk()) {
    const auto& d = reg.disk();
    return (q - d.center).squaredNorm() - d.radius * d.radius;
  }
  const Polygon& p = reg.polygon();
  switch (classify_point(q, p.vertices(), p.bounding_box(), kEps)) {
    case Side::Boundary:
      return 0.0;
    case Side::Inside:
      return -distance_to_boundary(q, p);
    case Side::Outside:
      return distance_to_boundary(q, p);
  }
  return 0.0;
}

bool point_in_region(const Vec2& q, const Region& reg) {
  if (reg.is_disk()) {
    const auto& d = reg.disk();
    return (q - d.center).norm() <= d.radius + kEps;
  }
  return point_in_polygon(q, reg.polygon());
}

double distance_to_region(const Vec2& q, const Region& reg) {
  if (reg.is_disk()) {
    const auto& d = reg.disk();
    return std::max(0.0, (q - d.center).norm() - d.radius);
  }
  return distance_to_polygon(q, reg.polygon());
}

}  // namespace swarmcov::geom
