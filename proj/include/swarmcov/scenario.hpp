#pragma once

#include "swarmcov/environment.hpp"
#include "swarmcov/learner.hpp"
#include "swarmcov/region_io.hpp"
#include "swarmcov/rewards.hpp"

#include <string>
#include <vector>

namespace swarmcov::harness {

// Named experiment preset: region, environment defaults, reward scheme and
// constants, training defaults.
struct Scenario {
  std::string name;
  geom::Region region;
  env::EnvConfig env;
  rewards::Scheme scheme = rewards::Scheme::CoverageRange;
  rewards::SwRewardSpec sw;
  rewards::CrRewardSpec cr;
  learner::TrainConfig train;
};

// square3: 3 m x 3 m square. rect1x9: 1 m x 9 m rectangle (equal area).
// disk: analytic disk of area 9 m^2. bedok: bundled reservoir ring, translated
// to the origin and scaled to a 6 m bounding-box width.
Scenario builtin_scenario(const std::string& name);

std::vector<std::string> builtin_scenario_names();

}  // namespace swarmcov::harness
