#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace swarmcov::nn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class OutputActivation { Linear, Tanh };

struct MlpSpec {
  std::vector<int> layer_sizes;  // input, hidden..., output
  OutputActivation output_activation = OutputActivation::Linear;

  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  int n_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }

  void validate() const;
  bool operator==(const MlpSpec&) const = default;
};

// Dense network parameters: per-layer weight matrix (out x in) and bias.
// Hidden layers are rectified; the output layer is linear or tanh-bounded.
struct Mlp {
  MlpSpec spec;
  std::vector<MatrixXd> weights;
  std::vector<VectorXd> biases;
};

Mlp make_mlp(const MlpSpec& spec);  // zero-initialized
// Uniform(-sqrt(6/(fan_in+fan_out)), +...) per layer, deterministic per seed.
Mlp make_mlp_random(const MlpSpec& spec, std::uint64_t seed);

bool params_finite(const Mlp& net);

// Activations recorded by forward for the matching backward call.
// Columns are batch samples throughout.
struct ForwardCache {
  MatrixXd input;
  std::vector<MatrixXd> pre;   // pre-activation per layer
  std::vector<MatrixXd> post;  // post-activation per layer; back() is the output
};

MatrixXd forward(const Mlp& net, const Eigen::Ref<const MatrixXd>& input,
                 ForwardCache* cache = nullptr);
VectorXd forward_vec(const Mlp& net, const Eigen::Ref<const VectorXd>& input,
                     ForwardCache* cache = nullptr);

struct Gradients {
  std::vector<MatrixXd> weights;
  std::vector<VectorXd> biases;
};

// Reverse-mode gradients of sum_over_batch(upstream . output) with respect to
// parameters, summed over the batch; optionally also with respect to the input
// (needed for the action-gradient chain).
Gradients backward(const Mlp& net, const ForwardCache& cache,
                   const Eigen::Ref<const MatrixXd>& upstream,
                   MatrixXd* input_grad = nullptr);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamConfig cfg;
  std::vector<MatrixXd> m_w, v_w;
  std::vector<VectorXd> m_b, v_b;
  long step = 0;
};

AdamState make_adam(const Mlp& net, const AdamConfig& cfg = {});

// Bias-corrected Adam update in place. Throws on non-finite gradients.
void adam_step(Mlp& net, const Gradients& grads, AdamState& state);

// Max relative error of backward against central finite differences over all
// parameters of a seeded random network on a seeded random input.
double gradient_check(const MlpSpec& spec, std::uint64_t seed, double fd_eps = 1e-5);

}  // namespace swarmcov::nn
