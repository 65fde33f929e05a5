#pragma once

#include "swarmcov/environment.hpp"
#include "swarmcov/geometry.hpp"

#include <Eigen/Dense>

#include <vector>

namespace swarmcov::rewards {

using geom::Region;
using geom::Vec2;

enum class Scheme { Swarming, CoverageRange };

enum class SwAggregate { Sum, Mean };

// Swarming scheme constants: region attraction branch pair plus the
// inter-agent proper/collision range bonuses.
struct SwRewardSpec {
  double R1_in = 150.0;
  double R2_out = 200.0;
  double alpha = 150.0;
  double beta = 200.0;
  double prop_lo = 0.85, prop_hi = 1.2;
  double coll_lo = 0.0, coll_hi = 0.56;

  void validate() const;
};

// Coverage-range scheme constants (branch offsets carry area units by
// construction; the disjoint branch mixes in a plain distance, as defined).
struct CrRewardSpec {
  double R1_full = 60.0;
  double R2_partial = 30.0;
  double R3_out = 0.0;
  double c1 = 1.0;
  double c2 = 5.0;
  bool clip_overall_to_region = true;

  void validate() const;
};

enum class UnionMethod { Exact, Grid };

// +R1_in strictly inside (signed value < 0), else -R2_out - D(pos).
double sw_region_reward(const Vec2& pos, const Region& reg, const SwRewardSpec& spec);

// alpha * #(pairs in proper range) - beta * #(pairs in collision range),
// unordered pairs counted once.
double sw_inter_agent_reward(const Eigen::Matrix2Xd& positions, const SwRewardSpec& spec);

// Every agent receives the same total: sum (or mean) over agents of the region
// term, plus the inter-agent term.
Eigen::VectorXd sw_shared_reward(const env::WorldState& state, const Region& reg,
                                 const SwRewardSpec& spec,
                                 SwAggregate aggregate = SwAggregate::Sum);

// Three-branch agent-specific coverage reward: fully inside, partial overlap,
// or disjoint with a distance penalty.
double cr_cover_reward(const geom::CoveragePolygon& agent, const Region& reg,
                       const CrRewardSpec& spec);

// Merged-overlap union of the coverage polygons, clipped to the region when
// the spec asks for it.
double overall_area_coverage(std::span<const geom::CoveragePolygon> agents,
                             const Region& reg, const CrRewardSpec& spec,
                             UnionMethod method = UnionMethod::Exact);

// c1 * individual + c2 * collective, per agent.
Eigen::VectorXd cr_overall_reward(const env::WorldState& state, const Region& reg,
                                  const CrRewardSpec& spec, double coverage_radius,
                                  int n_edges = 30, UnionMethod method = UnionMethod::Exact);

std::vector<geom::CoveragePolygon> coverage_polygons(const env::WorldState& state,
                                                     double radius, int n_edges = 30);

}  // namespace swarmcov::rewards
