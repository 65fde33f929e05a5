#include "swarmcov/net.hpp"

#include "swarmcov/rng.hpp"

#include <cmath>

namespace swarmcov::nn {

void MlpSpec::validate() const {
  if (layer_sizes.size() < 2) throw std::invalid_argument("mlp: need at least 2 layer sizes");
  for (int s : layer_sizes) {
    if (s <= 0) throw std::invalid_argument("mlp: layer sizes must be positive");
  }
}

Mlp make_mlp(const MlpSpec& spec) {
  spec.validate();
  Mlp net{spec, {}, {}};
  for (int l = 0; l < spec.n_layers(); ++l) {
    net.weights.push_back(MatrixXd::Zero(spec.layer_sizes[l + 1], spec.layer_sizes[l]));
    net.biases.push_back(VectorXd::Zero(spec.layer_sizes[l + 1]));
  }
  return net;
}

Mlp make_mlp_random(const MlpSpec& spec, std::uint64_t seed) {
  Mlp net = make_mlp(spec);
  Rng rng(seed);
  for (int l = 0; l < spec.n_layers(); ++l) {
    const double fan_in = spec.layer_sizes[l];
    const double fan_out = spec.layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    auto& w = net.weights[l];
    for (int i = 0; i < w.rows(); ++i) {
      for (int j = 0; j < w.cols(); ++j) {
        w(i, j) = rng.uniform(-limit, limit);
      }
    }
  }
  return net;
}

bool params_finite(const Mlp& net) {
  for (const auto& w : net.weights) {
    if (!w.allFinite()) return false;
  }
  for (const auto& b : net.biases) {
    if (!b.allFinite()) return false;
  }
  return true;
}

MatrixXd forward(const Mlp& net, const Eigen::Ref<const MatrixXd>& input,
                 ForwardCache* cache) {
  if (input.rows() != net.spec.input_size()) {
    throw std::invalid_argument("mlp forward: input size mismatch");
  }
  const int L = net.spec.n_layers();
  if (cache) {
    cache->input = input;
    cache->pre.assign(L, MatrixXd());
    cache->post.assign(L, MatrixXd());
  }
  MatrixXd h = input;
  for (int l = 0; l < L; ++l) {
    MatrixXd z = (net.weights[l] * h).colwise() + net.biases[l];
    if (cache) cache->pre[l] = z;
    if (l + 1 < L) {
      h = z.cwiseMax(0.0);
    } else if (net.spec.output_activation == OutputActivation::Tanh) {
      h = z.array().tanh().matrix();
    } else {
      h = std::move(z);
    }
    if (cache) cache->post[l] = h;
  }
  return h;
}

VectorXd forward_vec(const Mlp& net, const Eigen::Ref<const VectorXd>& input,
                     ForwardCache* cache) {
  return forward(net, input, cache).col(0);
}

Gradients backward(const Mlp& net, const ForwardCache& cache,
                   const Eigen::Ref<const MatrixXd>& upstream, MatrixXd* input_grad) {
  const int L = net.spec.n_layers();
  if (static_cast<int>(cache.pre.size()) != L || upstream.rows() != net.spec.output_size() ||
      upstream.cols() != cache.input.cols()) {
    throw std::invalid_argument("mlp backward: cache/upstream shape mismatch");
  }
  Gradients g;
  g.weights.resize(L);
  g.biases.resize(L);

  MatrixXd delta;  // dL/dz for the current layer
  if (net.spec.output_activation == OutputActivation::Tanh) {
    delta = upstream.cwiseProduct(
        (1.0 - cache.post[L - 1].array().square()).matrix());
  } else {
    delta = upstream;
  }
  for (int l = L - 1; l >= 0; --l) {
    const MatrixXd& below = (l == 0) ? cache.input : cache.post[l - 1];
    g.weights[l] = delta * below.transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = (net.weights[l].transpose() * delta)
                  .cwiseProduct((cache.pre[l - 1].array() > 0.0).cast<double>().matrix());
    } else if (input_grad) {
      *input_grad = net.weights[0].transpose() * delta;
    }
  }
  return g;
}

AdamState make_adam(const Mlp& net, const AdamConfig& cfg) {
  AdamState st;
  st.cfg = cfg;
  for (const auto& w : net.weights) {
    st.m_w.push_back(MatrixXd::Zero(w.rows(), w.cols()));
    st.v_w.push_back(MatrixXd::Zero(w.rows(), w.cols()));
  }
  for (const auto& b : net.biases) {
    st.m_b.push_back(VectorXd::Zero(b.size()));
    st.v_b.push_back(VectorXd::Zero(b.size()));
  }
  return st;
}

namespace {

template <typename T>
void adam_update(T& param, const T& grad, T& m, T& v, const AdamConfig& cfg,
                 double bc1, double bc2) {
  m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
  v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.array().square().matrix();
  param.array() -=
      cfg.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + cfg.eps);
}

}  // namespace

void adam_step(Mlp& net, const Gradients& grads, AdamState& state) {
  for (const auto& gw : grads.weights) {
    if (!gw.allFinite()) throw std::runtime_error("adam: non-finite weight gradient");
  }
  for (const auto& gb : grads.biases) {
    if (!gb.allFinite()) throw std::runtime_error("adam: non-finite bias gradient");
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.cfg.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    adam_update(net.weights[l], grads.weights[l], state.m_w[l], state.v_w[l], state.cfg,
                bc1, bc2);
    adam_update(net.biases[l], grads.biases[l], state.m_b[l], state.v_b[l], state.cfg,
                bc1, bc2);
  }
}

double gradient_check(const MlpSpec& spec, std::uint64_t seed, double fd_eps) {
  Mlp net = make_mlp_random(spec, seed);
  Rng rng(seed ^ 0x5eedf00dULL);
  MatrixXd input(spec.input_size(), 1);
  for (int i = 0; i < input.rows(); ++i) input(i, 0) = rng.uniform(-1.0, 1.0);
  MatrixXd upstream(spec.output_size(), 1);
  for (int i = 0; i < upstream.rows(); ++i) upstream(i, 0) = rng.uniform(-1.0, 1.0);

  ForwardCache cache;
  forward(net, input, &cache);
  const Gradients g = backward(net, cache, upstream);

  const auto objective = [&] {
    return (forward(net, input).cwiseProduct(upstream)).sum();
  };
  double max_rel = 0.0;
  const auto check_param = [&](double& p, double analytic) {
    const double saved = p;
    p = saved + fd_eps;
    const double hi = objective();
    p = saved - fd_eps;
    const double lo = objective();
    p = saved;
    const double fd = (hi - lo) / (2.0 * fd_eps);
    const double denom = std::max({std::abs(fd), std::abs(analytic), 1e-6});
    max_rel = std::max(max_rel, std::abs(fd - analytic) / denom);
  };
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    auto& w = net.weights[l];
    for (int i = 0; i < w.rows(); ++i) {
      for (int j = 0; j < w.cols(); ++j) {
        check_param(w(i, j), g.weights[l](i, j));
      }
    }
    auto& b = net.biases[l];
    for (int i = 0; i < b.size(); ++i) {
      check_param(b(i), g.biases[l](i));
    }
  }
  return max_rel;
}

}  // namespace swarmcov::nn
