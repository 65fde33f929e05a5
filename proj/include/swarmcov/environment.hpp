#pragma once

#include "swarmcov/geometry.hpp"
#include "swarmcov/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>

namespace swarmcov::env {

using geom::Vec2;

enum class KinematicsMode { Velocity, Displacement };

struct EnvConfig {
  int n_agents = 9;
  double agent_radius = 0.08;
  double coverage_radius = 0.5;
  Eigen::AlignedBox2d spawn_box{Vec2(0.0, 0.0), Vec2(0.5, 0.5)};
  double dt = 0.1;
  double damping = 0.25;
  double u_max = 1.0;
  double v_max = 1.0;
  int steps_per_episode = 25;
  KinematicsMode kinematics_mode = KinematicsMode::Velocity;
  bool observe_velocity = false;

  int obs_dim() const { return observe_velocity ? 4 : 2; }

  void validate() const;
};

// Immutable snapshot of the particle world. Columns are agents.
struct WorldState {
  Eigen::Matrix2Xd positions;
  Eigen::Matrix2Xd velocities;
  int step_index = 0;
};

// Per-agent 2-D command, each component in [-1, 1]; columns are agents.
struct Action {
  Eigen::Matrix2Xd commands;
};

// 0.5 m x 0.5 m square at the region's bounding-box minimum corner, pushed
// diagonally outward by 0.5 m (the "confined corner" release area).
Eigen::AlignedBox2d default_spawn_box(const geom::Region& region);

WorldState reset(const EnvConfig& cfg, std::uint64_t seed);

WorldState step(const WorldState& state, const Action& act, const EnvConfig& cfg);

// The agent's own observation: position, optionally followed by velocity.
Eigen::VectorXd observe(const WorldState& state, int agent, const EnvConfig& cfg);

// Concatenation (o_1, ..., o_N).
Eigen::VectorXd joint_observation(const WorldState& state, const EnvConfig& cfg);

}  // namespace swarmcov::env
