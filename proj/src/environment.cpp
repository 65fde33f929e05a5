#include "swarmcov/environment.hpp"

namespace swarmcov::env {

void EnvConfig::validate() const {
  if (n_agents < 1) throw std::invalid_argument("env: n_agents must be >= 1");
  if (agent_radius <= 0.0) throw std::invalid_argument("env: agent_radius must be > 0");
  if (coverage_radius <= 0.0) throw std::invalid_argument("env: coverage_radius must be > 0");
  if (dt <= 0.0) throw std::invalid_argument("env: dt must be > 0");
  if (damping < 0.0 || damping >= 1.0) throw std::invalid_argument("env: damping must be in [0,1)");
  if (u_max <= 0.0) throw std::invalid_argument("env: u_max must be > 0");
  if (v_max <= 0.0) throw std::invalid_argument("env: v_max must be > 0");
  if (steps_per_episode < 1) throw std::invalid_argument("env: steps_per_episode must be >= 1");
  if (spawn_box.isEmpty() || spawn_box.sizes().minCoeff() <= 0.0) {
    throw std::invalid_argument("env: spawn_box must be non-degenerate");
  }
}

Eigen::AlignedBox2d default_spawn_box(const geom::Region& region) {
  const Vec2 corner = region.polygon().bounding_box().min();
  return Eigen::AlignedBox2d(corner - Vec2(1.0, 1.0), corner - Vec2(0.5, 0.5));
}

WorldState reset(const EnvConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  WorldState s;
  s.positions.resize(2, cfg.n_agents);
  s.velocities = Eigen::Matrix2Xd::Zero(2, cfg.n_agents);
  const Vec2 lo = cfg.spawn_box.min();
  const Vec2 hi = cfg.spawn_box.max();
  for (int i = 0; i < cfg.n_agents; ++i) {
    const double x = rng.uniform(lo.x(), hi.x());
    const double y = rng.uniform(lo.y(), hi.y());
    s.positions.col(i) = Vec2(x, y);
  }
  s.step_index = 0;
  return s;
}

WorldState step(const WorldState& state, const Action& act, const EnvConfig& cfg) {
  if (state.positions.cols() != cfg.n_agents || act.commands.cols() != cfg.n_agents) {
    throw std::invalid_argument("env: state/action shape mismatch with n_agents");
  }
  const Eigen::Matrix2Xd u = act.commands.cwiseMax(-1.0).cwiseMin(1.0) * cfg.u_max;

  WorldState next;
  next.positions.resize(2, cfg.n_agents);
  next.velocities.resize(2, cfg.n_agents);
  next.step_index = state.step_index + 1;

  for (int i = 0; i < cfg.n_agents; ++i) {
    if (cfg.kinematics_mode == KinematicsMode::Velocity) {
      Vec2 v = (1.0 - cfg.damping) * state.velocities.col(i) + u.col(i) * cfg.dt;
      const double speed = v.norm();
      if (speed > cfg.v_max) v *= cfg.v_max / speed;
      next.velocities.col(i) = v;
      next.positions.col(i) = state.positions.col(i) + v * cfg.dt;
    } else {
      Vec2 d = u.col(i);
      const double max_norm = cfg.v_max * cfg.dt;
      const double dn = d.norm();
      if (dn > max_norm) d *= max_norm / dn;
      next.positions.col(i) = state.positions.col(i) + d;
      next.velocities.col(i) = d / cfg.dt;
    }
  }
  return next;
}

Eigen::VectorXd observe(const WorldState& state, int agent, const EnvConfig& cfg) {
  if (agent < 0 || agent >= static_cast<int>(state.positions.cols())) {
    throw std::out_of_range("env: agent index out of range");
  }
  Eigen::VectorXd o(cfg.obs_dim());
  o.head<2>() = state.positions.col(agent);
  if (cfg.observe_velocity) o.tail<2>() = state.velocities.col(agent);
  return o;
}

Eigen::VectorXd joint_observation(const WorldState& state, const EnvConfig& cfg) {
  const int n = static_cast<int>(state.positions.cols());
  Eigen::VectorXd x(n * cfg.obs_dim());
  for (int i = 0; i < n; ++i) {
    x.segment(i * cfg.obs_dim(), cfg.obs_dim()) = observe(state, i, cfg);
  }
  return x;
}

}  // namespace swarmcov::env
