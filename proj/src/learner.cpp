#include "swarmcov/learner.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace swarmcov::learner {

void TrainConfig::validate() const {
  if (gamma <= 0.0 || gamma > 1.0) throw std::invalid_argument("train: gamma must be in (0,1]");
  if (tau <= 0.0 || tau > 1.0) throw std::invalid_argument("train: tau must be in (0,1]");
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (capacity < batch_size) throw std::invalid_argument("train: capacity must be >= batch_size");
  if (update_every < 1) throw std::invalid_argument("train: update_every must be >= 1");
  if (warmup < 0) throw std::invalid_argument("train: warmup must be >= 0");
  if (noise_sigma < 0.0 || noise_sigma_final < 0.0) {
    throw std::invalid_argument("train: noise scales must be >= 0");
  }
  if (episodes < 1) throw std::invalid_argument("train: episodes must be >= 1");
  if (actor_lr <= 0.0 || critic_lr <= 0.0) throw std::invalid_argument("train: learning rates must be > 0");
}

std::vector<AgentNets> make_agent_nets(const env::EnvConfig& env_cfg,
                                       const TrainConfig& cfg, std::uint64_t seed) {
  const int n = env_cfg.n_agents;
  const int obs = env_cfg.obs_dim();

  nn::MlpSpec actor_spec;
  actor_spec.layer_sizes.push_back(obs);
  for (int h : cfg.actor_hidden) actor_spec.layer_sizes.push_back(h);
  actor_spec.layer_sizes.push_back(2);
  actor_spec.output_activation = nn::OutputActivation::Tanh;

  nn::MlpSpec critic_spec;
  critic_spec.layer_sizes.push_back(n * obs + n * 2);
  for (int h : cfg.critic_hidden) critic_spec.layer_sizes.push_back(h);
  critic_spec.layer_sizes.push_back(1);
  critic_spec.output_activation = nn::OutputActivation::Linear;

  std::vector<AgentNets> nets;
  nets.reserve(n);
  for (int i = 0; i < n; ++i) {
    AgentNets an;
    an.actor = nn::make_mlp_random(actor_spec, seed + 0x1000u + 4u * i);
    an.critic = nn::make_mlp_random(critic_spec, seed + 0x1001u + 4u * i);
    an.target_actor = an.actor;
    an.target_critic = an.critic;
    an.actor_opt = nn::make_adam(an.actor, {.lr = cfg.actor_lr});
    an.critic_opt = nn::make_adam(an.critic, {.lr = cfg.critic_lr});
    nets.push_back(std::move(an));
  }
  return nets;
}

Batch assemble_batch(const std::vector<const Transition*>& sample) {
  if (sample.empty()) throw std::invalid_argument("batch: empty sample");
  const auto S = static_cast<Eigen::Index>(sample.size());
  Batch b;
  b.x.resize(sample[0]->x.size(), S);
  b.a.resize(sample[0]->a.size(), S);
  b.r.resize(sample[0]->r.size(), S);
  b.x_next.resize(sample[0]->x_next.size(), S);
  for (Eigen::Index j = 0; j < S; ++j) {
    b.x.col(j) = sample[j]->x;
    b.a.col(j) = sample[j]->a;
    b.r.col(j) = sample[j]->r;
    b.x_next.col(j) = sample[j]->x_next;
  }
  return b;
}

Eigen::VectorXd compute_target(const Batch& batch, int agent,
                               const std::vector<AgentNets>& nets,
                               const TrainConfig& cfg) {
  const int n = static_cast<int>(nets.size());
  const int obs = static_cast<int>(batch.x_next.rows()) / n;
  const auto S = batch.x_next.cols();

  Eigen::MatrixXd next_actions(2 * n, S);
  for (int j = 0; j < n; ++j) {
    next_actions.middleRows(2 * j, 2) =
        nn::forward(nets[j].target_actor, batch.x_next.middleRows(obs * j, obs));
  }
  Eigen::MatrixXd critic_in(batch.x_next.rows() + 2 * n, S);
  critic_in.topRows(batch.x_next.rows()) = batch.x_next;
  critic_in.bottomRows(2 * n) = next_actions;
  const Eigen::MatrixXd q_next = nn::forward(nets[agent].target_critic, critic_in);

  const int reward_row = (cfg.reward_mode == RewardMode::Shared) ? 0 : agent;
  return batch.r.row(reward_row).transpose() + cfg.gamma * q_next.row(0).transpose();
}

double critic_update(const Batch& batch, int agent, std::vector<AgentNets>& nets,
                     const TrainConfig& cfg) {
  const auto S = batch.x.cols();
  const Eigen::VectorXd y = compute_target(batch, agent, nets, cfg);

  Eigen::MatrixXd critic_in(batch.x.rows() + batch.a.rows(), S);
  critic_in.topRows(batch.x.rows()) = batch.x;
  critic_in.bottomRows(batch.a.rows()) = batch.a;

  nn::ForwardCache cache;
  const Eigen::MatrixXd q = nn::forward(nets[agent].critic, critic_in, &cache);
  const Eigen::RowVectorXd err = q.row(0) - y.transpose();
  const double loss = err.squaredNorm() / static_cast<double>(S);
  if (!std::isfinite(loss)) throw std::runtime_error("critic_update: non-finite loss");

  const Eigen::MatrixXd upstream = (2.0 / static_cast<double>(S)) * err;
  const nn::Gradients g = nn::backward(nets[agent].critic, cache, upstream);
  nn::adam_step(nets[agent].critic, g, nets[agent].critic_opt);
  return loss;
}

double actor_update(const Batch& batch, int agent, std::vector<AgentNets>& nets,
                    const TrainConfig& cfg) {
  (void)cfg;
  const int n = static_cast<int>(nets.size());
  const int obs = static_cast<int>(batch.x.rows()) / n;
  const auto S = batch.x.cols();

  nn::ForwardCache actor_cache;
  const Eigen::MatrixXd a_i =
      nn::forward(nets[agent].actor, batch.x.middleRows(obs * agent, obs), &actor_cache);

  Eigen::MatrixXd critic_in(batch.x.rows() + batch.a.rows(), S);
  critic_in.topRows(batch.x.rows()) = batch.x;
  critic_in.bottomRows(batch.a.rows()) = batch.a;
  critic_in.middleRows(batch.x.rows() + 2 * agent, 2) = a_i;

  nn::ForwardCache critic_cache;
  nn::forward(nets[agent].critic, critic_in, &critic_cache);

  const Eigen::MatrixXd q_upstream =
      Eigen::MatrixXd::Constant(1, S, 1.0 / static_cast<double>(S));
  Eigen::MatrixXd critic_input_grad;
  nn::backward(nets[agent].critic, critic_cache, q_upstream, &critic_input_grad);
  const Eigen::MatrixXd dq_da = critic_input_grad.middleRows(batch.x.rows() + 2 * agent, 2);

  nn::Gradients g = nn::backward(nets[agent].actor, actor_cache, dq_da);
  double norm_sq = 0.0;
  for (auto& gw : g.weights) {
    norm_sq += gw.squaredNorm();
    gw = -gw;  // ascent
  }
  for (auto& gb : g.biases) {
    norm_sq += gb.squaredNorm();
    gb = -gb;
  }
  nn::adam_step(nets[agent].actor, g, nets[agent].actor_opt);
  return std::sqrt(norm_sq);
}

void soft_update(nn::Mlp& target, const nn::Mlp& source, double tau) {
  if (!(target.spec == source.spec)) {
    throw std::invalid_argument("soft_update: spec mismatch");
  }
  for (std::size_t l = 0; l < target.weights.size(); ++l) {
    target.weights[l] = tau * source.weights[l] + (1.0 - tau) * target.weights[l];
    target.biases[l] = tau * source.biases[l] + (1.0 - tau) * target.biases[l];
  }
}

StepRewardInfo compute_step_rewards(const env::WorldState& state, const geom::Region& reg,
                                    const RewardSetup& setup, const env::EnvConfig& env_cfg,
                                    const TrainConfig& cfg, bool want_coverage) {
  StepRewardInfo info;
  if (setup.scheme == rewards::Scheme::Swarming) {
    info.r = rewards::sw_shared_reward(state, reg, setup.sw, setup.sw_aggregate);
    info.shared_component = info.r[0];
    info.coverage_fraction = 0.0;
    if (want_coverage) {
      const auto covs =
          rewards::coverage_polygons(state, env_cfg.coverage_radius, setup.coverage_n_edges);
      info.coverage_fraction =
          rewards::overall_area_coverage(covs, reg, setup.cr, setup.union_method) / reg.area();
    }
    return info;
  }
  const auto covs =
      rewards::coverage_polygons(state, env_cfg.coverage_radius, setup.coverage_n_edges);
  const double overall = rewards::overall_area_coverage(covs, reg, setup.cr, setup.union_method);
  info.shared_component = setup.cr.c2 * overall;
  info.coverage_fraction = overall / reg.area();
  info.r.resize(covs.size());
  for (std::size_t i = 0; i < covs.size(); ++i) {
    info.r[static_cast<Eigen::Index>(i)] =
        setup.cr.c1 * rewards::cr_cover_reward(covs[i], reg, setup.cr) + info.shared_component;
  }
  // Original-MADDPG routing on a per-agent scheme: share the summation.
  if (cfg.reward_mode == RewardMode::Shared) {
    info.r.setConstant(info.r.sum());
  }
  return info;
}

namespace {

double noise_sigma_at(const TrainConfig& cfg, int episode) {
  const int half = std::max(1, cfg.episodes / 2);
  if (episode >= half) return cfg.noise_sigma_final;
  const double t = static_cast<double>(episode) / static_cast<double>(half);
  return cfg.noise_sigma + t * (cfg.noise_sigma_final - cfg.noise_sigma);
}

void check_finite(const std::vector<AgentNets>& nets, int episode, int step) {
  for (std::size_t i = 0; i < nets.size(); ++i) {
    if (!nn::params_finite(nets[i].actor) || !nn::params_finite(nets[i].critic) ||
        !nn::params_finite(nets[i].target_actor) || !nn::params_finite(nets[i].target_critic)) {
      throw std::runtime_error("training diverged: non-finite parameters in agent " +
                               std::to_string(i) + " at episode " + std::to_string(episode) +
                               ", step " + std::to_string(step));
    }
  }
}

}  // namespace

TrainResult train_run(const env::EnvConfig& env_cfg, const geom::Region& reg,
                      const RewardSetup& setup, const TrainConfig& cfg,
                      std::uint64_t seed, bool record_wall_time) {
  env_cfg.validate();
  cfg.validate();
  setup.sw.validate();
  setup.cr.validate();

  const int n = env_cfg.n_agents;
  std::vector<AgentNets> nets = make_agent_nets(env_cfg, cfg, seed);
  ReplayBuffer buffer(static_cast<std::size_t>(cfg.capacity));
  Rng episode_rng(seed ^ 0xe115u);
  Rng noise_rng(seed ^ 0x4015eu);
  Rng sample_rng(seed ^ 0x5a3fu);

  TrainResult result;
  result.metrics.reserve(cfg.episodes);
  long global_step = 0;

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    const auto t0 = std::chrono::steady_clock::now();
    env::WorldState state = env::reset(env_cfg, episode_rng.next_u64());
    Eigen::VectorXd reward_accum = Eigen::VectorXd::Zero(n);
    double shared_accum = 0.0;
    double final_coverage = 0.0;
    const double sigma = noise_sigma_at(cfg, ep);

    for (int step = 0; step < env_cfg.steps_per_episode; ++step) {
      const Eigen::VectorXd x = env::joint_observation(state, env_cfg);
      env::Action act;
      act.commands.resize(2, n);
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd o = env::observe(state, i, env_cfg);
        Eigen::VectorXd u = nn::forward_vec(nets[i].actor, o);
        u[0] += sigma * noise_rng.gaussian();
        u[1] += sigma * noise_rng.gaussian();
        act.commands.col(i) = u.cwiseMax(-1.0).cwiseMin(1.0);
      }
      const env::WorldState next = env::step(state, act, env_cfg);
      const bool last_step = step + 1 == env_cfg.steps_per_episode;
      const StepRewardInfo ri =
          compute_step_rewards(next, reg, setup, env_cfg, cfg, last_step);

      Transition t;
      t.x = x;
      t.a = Eigen::Map<const Eigen::VectorXd>(act.commands.data(), 2 * n);
      t.r = ri.r;
      t.x_next = env::joint_observation(next, env_cfg);
      buffer.push(std::move(t));

      reward_accum += ri.r;
      shared_accum += ri.shared_component;
      if (last_step) final_coverage = ri.coverage_fraction;

      state = next;
      ++global_step;

      const bool ready = buffer.size() >= static_cast<std::size_t>(
                             std::max(cfg.warmup, cfg.batch_size));
      if (ready && global_step % cfg.update_every == 0) {
        for (int i = 0; i < n; ++i) {
          const Batch batch = assemble_batch(
              buffer.sample(static_cast<std::size_t>(cfg.batch_size), sample_rng));
          critic_update(batch, i, nets, cfg);
          actor_update(batch, i, nets, cfg);
        }
        for (int i = 0; i < n; ++i) {
          soft_update(nets[i].target_actor, nets[i].actor, cfg.tau);
          soft_update(nets[i].target_critic, nets[i].critic, cfg.tau);
        }
        check_finite(nets, ep, step);
      }
    }

    EpisodeMetrics m;
    m.episode = ep;
    m.mean_reward = reward_accum / static_cast<double>(env_cfg.steps_per_episode);
    m.shared_reward = shared_accum / static_cast<double>(env_cfg.steps_per_episode);
    m.coverage_fraction = final_coverage;
    if (record_wall_time) {
      m.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    }
    result.metrics.push_back(std::move(m));
  }
  result.nets = std::move(nets);
  return result;
}

EvalSummary evaluate(const std::vector<nn::Mlp>& actors, const env::EnvConfig& env_cfg,
                     const geom::Region& reg, const RewardSetup& setup,
                     const TrainConfig& cfg, int episodes, std::uint64_t seed) {
  env_cfg.validate();
  if (static_cast<int>(actors.size()) != env_cfg.n_agents) {
    throw std::invalid_argument("evaluate: actor count mismatch");
  }
  const int n = env_cfg.n_agents;
  Rng episode_rng(seed ^ 0xe115u);
  EvalSummary summary;
  summary.episodes = episodes;
  summary.mean_reward_per_agent = Eigen::VectorXd::Zero(n);
  double coverage_sum = 0.0;

  for (int ep = 0; ep < episodes; ++ep) {
    env::WorldState state = env::reset(env_cfg, episode_rng.next_u64());
    for (int step = 0; step < env_cfg.steps_per_episode; ++step) {
      env::Action act;
      act.commands.resize(2, n);
      for (int i = 0; i < n; ++i) {
        act.commands.col(i) = nn::forward_vec(actors[i], env::observe(state, i, env_cfg));
      }
      state = env::step(state, act, env_cfg);
      const bool last_step = step + 1 == env_cfg.steps_per_episode;
      const StepRewardInfo ri =
          compute_step_rewards(state, reg, setup, env_cfg, cfg, last_step);
      summary.mean_reward_per_agent += ri.r;
      if (last_step) coverage_sum += ri.coverage_fraction;
    }
  }
  summary.mean_reward_per_agent /=
      static_cast<double>(episodes * env_cfg.steps_per_episode);
  summary.mean_final_coverage_fraction = coverage_sum / static_cast<double>(episodes);
  return summary;
}

EvalSummary evaluate(const std::vector<AgentNets>& nets, const env::EnvConfig& env_cfg,
                     const geom::Region& reg, const RewardSetup& setup,
                     const TrainConfig& cfg, int episodes, std::uint64_t seed) {
  std::vector<nn::Mlp> actors;
  actors.reserve(nets.size());
  for (const auto& an : nets) actors.push_back(an.actor);
  return evaluate(actors, env_cfg, reg, setup, cfg, episodes, seed);
}

}  // namespace swarmcov::learner
