#include "swarmcov/rewards.hpp"

#include <stdexcept>

namespace swarmcov::rewards {

void SwRewardSpec::validate() const {
  if (R1_in < 0.0 || R2_out < 0.0 || alpha < 0.0 || beta < 0.0) {
    throw std::invalid_argument("sw: reward magnitudes must be >= 0");
  }
  if (!(prop_lo < prop_hi)) throw std::invalid_argument("sw: prop_range must have lower < upper");
  if (!(coll_lo < coll_hi)) throw std::invalid_argument("sw: coll_range must have lower < upper");
  if (coll_hi > prop_lo && prop_hi > coll_lo) {
    throw std::invalid_argument("sw: prop_range and coll_range must be disjoint");
  }
}

void CrRewardSpec::validate() const {
  if (c1 < 0.0 || c2 < 0.0) throw std::invalid_argument("cr: weights must be >= 0");
}

double sw_region_reward(const Vec2& pos, const Region& reg, const SwRewardSpec& spec) {
  const double d = geom::signed_region_value(pos, reg);
  if (d < 0.0) return spec.R1_in;
  return -spec.R2_out - d;
}

double sw_inter_agent_reward(const Eigen::Matrix2Xd& positions, const SwRewardSpec& spec) {
  const int n = static_cast<int>(positions.cols());
  int prop = 0;
  int coll = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = (positions.col(i) - positions.col(j)).norm();
      if (d >= spec.prop_lo && d <= spec.prop_hi) ++prop;
      if (d >= spec.coll_lo && d <= spec.coll_hi) ++coll;
    }
  }
  return spec.alpha * prop - spec.beta * coll;
}

Eigen::VectorXd sw_shared_reward(const env::WorldState& state, const Region& reg,
                                 const SwRewardSpec& spec, SwAggregate aggregate) {
  const int n = static_cast<int>(state.positions.cols());
  double total = sw_inter_agent_reward(state.positions, spec);
  for (int i = 0; i < n; ++i) {
    total += sw_region_reward(state.positions.col(i), reg, spec);
  }
  if (aggregate == SwAggregate::Mean) total /= static_cast<double>(n);
  return Eigen::VectorXd::Constant(n, total);
}

namespace {

// Eq. branch 1 needs containment that holds for concave regions too: every
// vertex inside and the clipped area equal to the full footprint area.
bool fully_inside(const geom::CoveragePolygon& agent, const geom::Polygon& reg_poly,
                  double* inter_area_out) {
  const auto& v = agent.polygon.vertices();
  bool all_vertices_in = true;
  for (int i = 0; i < v.cols() && all_vertices_in; ++i) {
    all_vertices_in = geom::point_in_polygon(v.col(i), reg_poly);
  }
  const double inter = geom::intersection_area(agent.polygon, reg_poly);
  *inter_area_out = inter;
  return all_vertices_in && std::abs(inter - agent.polygon.area()) <= 1e-9;
}

}  // namespace

double cr_cover_reward(const geom::CoveragePolygon& agent, const Region& reg,
                       const CrRewardSpec& spec) {
  const geom::Polygon& reg_poly = reg.polygon();
  double inter = 0.0;
  if (fully_inside(agent, reg_poly, &inter)) {
    return spec.R1_full + agent.polygon.area();
  }
  if (inter > 0.0) {
    return spec.R2_partial + inter;
  }
  // disjoint: min distance over footprint vertices and center
  double dist = geom::distance_to_region(agent.center, reg);
  const auto& v = agent.polygon.vertices();
  for (int i = 0; i < v.cols(); ++i) {
    dist = std::min(dist, geom::distance_to_region(v.col(i), reg));
  }
  return -spec.R3_out - dist;
}

double overall_area_coverage(std::span<const geom::CoveragePolygon> agents,
                             const Region& reg, const CrRewardSpec& spec,
                             UnionMethod method) {
  std::vector<geom::Polygon> polys;
  polys.reserve(agents.size());
  for (const auto& a : agents) polys.push_back(a.polygon);
  if (method == UnionMethod::Grid) {
    if (!spec.clip_overall_to_region) return geom::union_area_grid(polys);
    std::vector<geom::Polygon> with_clip = polys;
    with_clip.push_back(reg.polygon());
    return geom::union_area_grid(polys) + reg.polygon().area() -
           geom::union_area_grid(with_clip);
  }
  if (spec.clip_overall_to_region) {
    return geom::union_area_clipped(polys, reg.polygon());
  }
  return geom::union_area(polys);
}

std::vector<geom::CoveragePolygon> coverage_polygons(const env::WorldState& state,
                                                     double radius, int n_edges) {
  std::vector<geom::CoveragePolygon> covs;
  const int n = static_cast<int>(state.positions.cols());
  covs.reserve(n);
  for (int i = 0; i < n; ++i) {
    covs.push_back(geom::make_coverage_polygon(state.positions.col(i), radius, n_edges));
  }
  return covs;
}

Eigen::VectorXd cr_overall_reward(const env::WorldState& state, const Region& reg,
                                  const CrRewardSpec& spec, double coverage_radius,
                                  int n_edges, UnionMethod method) {
  const auto covs = coverage_polygons(state, coverage_radius, n_edges);
  const double collective = spec.c2 * overall_area_coverage(covs, reg, spec, method);
  Eigen::VectorXd r(covs.size());
  for (std::size_t i = 0; i < covs.size(); ++i) {
    r[static_cast<int>(i)] = spec.c1 * cr_cover_reward(covs[i], reg, spec) + collective;
  }
  return r;
}

}  // namespace swarmcov::rewards
