#pragma once

#include "swarmcov/environment.hpp"
#include "swarmcov/geometry.hpp"
#include "swarmcov/net.hpp"
#include "swarmcov/replay.hpp"
#include "swarmcov/rewards.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace swarmcov::learner {

enum class RewardMode { Shared, PerAgent };

// Reward-routing plus scheme constants used by the training and eval rollouts.
struct RewardSetup {
  rewards::Scheme scheme = rewards::Scheme::CoverageRange;
  rewards::SwRewardSpec sw;
  rewards::CrRewardSpec cr;
  rewards::SwAggregate sw_aggregate = rewards::SwAggregate::Sum;
  rewards::UnionMethod union_method = rewards::UnionMethod::Exact;
  int coverage_n_edges = 30;
};

struct TrainConfig {
  double gamma = 0.95;
  double tau = 0.01;
  int batch_size = 256;
  int capacity = 100000;
  int update_every = 25;
  int warmup = 1000;
  double noise_sigma = 0.3;        // decays linearly to noise_sigma_final
  double noise_sigma_final = 0.05; // ...over the first half of training
  int episodes = 10000;
  RewardMode reward_mode = RewardMode::PerAgent;
  double actor_lr = 1e-3;
  double critic_lr = 1e-3;
  std::vector<int> actor_hidden{64, 64};
  std::vector<int> critic_hidden{64, 64};

  void validate() const;
};

// Per-agent network bundle: live actor/critic, their slow-tracking targets,
// and optimizer state.
struct AgentNets {
  nn::Mlp actor;
  nn::Mlp critic;
  nn::Mlp target_actor;
  nn::Mlp target_critic;
  nn::AdamState actor_opt;
  nn::AdamState critic_opt;
};

std::vector<AgentNets> make_agent_nets(const env::EnvConfig& env_cfg,
                                       const TrainConfig& cfg, std::uint64_t seed);

// Column-major minibatch view of sampled transitions.
struct Batch {
  Eigen::MatrixXd x;       // joint obs, one column per sample
  Eigen::MatrixXd a;       // joint action (2N rows)
  Eigen::MatrixXd r;       // per-agent rewards (N rows)
  Eigen::MatrixXd x_next;
};

Batch assemble_batch(const std::vector<const Transition*>& sample);

// y^j = r_i^j + gamma * Q'_i(x'^j, mu'_1(o'_1), ..., mu'_N(o'_N))
Eigen::VectorXd compute_target(const Batch& batch, int agent,
                               const std::vector<AgentNets>& nets,
                               const TrainConfig& cfg);

// One Adam step on the critic toward the bootstrapped targets; returns the
// pre-step mean squared error.
double critic_update(const Batch& batch, int agent, std::vector<AgentNets>& nets,
                     const TrainConfig& cfg);

// One Adam ascent step on the actor along the sampled deterministic policy
// gradient; other agents' actions stay as recorded. Returns the gradient norm.
double actor_update(const Batch& batch, int agent, std::vector<AgentNets>& nets,
                    const TrainConfig& cfg);

// target <- tau * source + (1 - tau) * target
void soft_update(nn::Mlp& target, const nn::Mlp& source, double tau);

struct StepRewardInfo {
  Eigen::VectorXd r;         // what each agent receives
  double shared_component;   // scheme's collective part (identical across agents)
  double coverage_fraction;  // merged coverage / region area (when requested)
};

StepRewardInfo compute_step_rewards(const env::WorldState& state, const geom::Region& reg,
                                    const RewardSetup& setup, const env::EnvConfig& env_cfg,
                                    const TrainConfig& cfg, bool want_coverage);

struct EpisodeMetrics {
  int episode = 0;
  Eigen::VectorXd mean_reward;  // per agent, averaged over the episode's steps
  double shared_reward = 0.0;   // collective component, averaged over steps
  double coverage_fraction = 0.0;  // at the episode's final step
  double wall_ms = 0.0;            // 0 unless wall-time recording is enabled
};

struct TrainResult {
  std::vector<EpisodeMetrics> metrics;
  std::vector<AgentNets> nets;
};

// Full training loop: CTDE rollouts with exploration noise, replay, and
// per-agent critic/actor/target updates every update_every steps after warmup.
// Deterministic for a given (configs, seed).
TrainResult train_run(const env::EnvConfig& env_cfg, const geom::Region& reg,
                      const RewardSetup& setup, const TrainConfig& cfg,
                      std::uint64_t seed, bool record_wall_time = false);

struct EvalSummary {
  Eigen::VectorXd mean_reward_per_agent;
  double mean_final_coverage_fraction = 0.0;
  int episodes = 0;
};

// Execution-phase rollouts: each agent acts from its own observation through
// its actor alone, no noise, no critics.
EvalSummary evaluate(const std::vector<nn::Mlp>& actors, const env::EnvConfig& env_cfg,
                     const geom::Region& reg, const RewardSetup& setup,
                     const TrainConfig& cfg, int episodes, std::uint64_t seed);

EvalSummary evaluate(const std::vector<AgentNets>& nets, const env::EnvConfig& env_cfg,
                     const geom::Region& reg, const RewardSetup& setup,
                     const TrainConfig& cfg, int episodes, std::uint64_t seed);

}  // namespace swarmcov::learner
