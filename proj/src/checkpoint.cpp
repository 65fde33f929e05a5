#include "swarmcov/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace swarmcov::learner {

namespace {

constexpr char kMagic[8] = {'S', 'W', 'C', 'O', 'V', 'C', 'K', '1'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path)
      : tmp_(path.string() + ".tmp"), final_(path), out_(tmp_, std::ios::binary) {
    if (!out_) throw std::runtime_error("checkpoint: cannot open " + tmp_.string());
  }
  void u32(std::uint32_t v) { raw(&v, sizeof v); }
  void i64(std::int64_t v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }
  void bytes(const void* p, std::size_t n) { raw(p, n); }
  void matrix(const Eigen::MatrixXd& m) { raw(m.data(), sizeof(double) * m.size()); }
  void vector(const Eigen::VectorXd& v) { raw(v.data(), sizeof(double) * v.size()); }
  void commit() {
    out_.flush();
    if (!out_) throw std::runtime_error("checkpoint: write failed for " + tmp_.string());
    out_.close();
    std::filesystem::rename(tmp_, final_);
  }

 private:
  void raw(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), n); }
  std::filesystem::path tmp_, final_;
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
    if (!in_) throw std::runtime_error("checkpoint: cannot open " + path.string());
  }
  std::uint32_t u32() {
    std::uint32_t v;
    raw(&v, sizeof v);
    return v;
  }
  std::int64_t i64() {
    std::int64_t v;
    raw(&v, sizeof v);
    return v;
  }
  double f64() {
    double v;
    raw(&v, sizeof v);
    return v;
  }
  void bytes(void* p, std::size_t n) { raw(p, n); }
  void matrix(Eigen::MatrixXd& m) { raw(m.data(), sizeof(double) * m.size()); }
  void vector(Eigen::VectorXd& v) { raw(v.data(), sizeof(double) * v.size()); }
  bool at_end() {
    in_.peek();
    return in_.eof();
  }

 private:
  void raw(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), n);
    if (!in_) throw std::runtime_error("checkpoint: truncated file");
  }
  std::ifstream in_;
};

void write_spec(Writer& w, const nn::MlpSpec& spec) {
  w.u32(static_cast<std::uint32_t>(spec.layer_sizes.size()));
  for (int s : spec.layer_sizes) w.u32(static_cast<std::uint32_t>(s));
  w.u32(spec.output_activation == nn::OutputActivation::Tanh ? 1u : 0u);
}

nn::MlpSpec read_spec(Reader& r) {
  nn::MlpSpec spec;
  const std::uint32_t n = r.u32();
  if (n < 2 || n > 64) throw std::runtime_error("checkpoint: bad layer count");
  for (std::uint32_t i = 0; i < n; ++i) spec.layer_sizes.push_back(static_cast<int>(r.u32()));
  spec.output_activation = r.u32() ? nn::OutputActivation::Tanh : nn::OutputActivation::Linear;
  spec.validate();
  return spec;
}

void write_mlp(Writer& w, const nn::Mlp& net) {
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    w.matrix(net.weights[l]);
    w.vector(net.biases[l]);
  }
}

void read_mlp(Reader& r, nn::Mlp& net) {
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    r.matrix(net.weights[l]);
    r.vector(net.biases[l]);
  }
}

void write_adam(Writer& w, const nn::AdamState& st) {
  w.f64(st.cfg.lr);
  w.f64(st.cfg.beta1);
  w.f64(st.cfg.beta2);
  w.f64(st.cfg.eps);
  w.i64(st.step);
  for (std::size_t l = 0; l < st.m_w.size(); ++l) {
    w.matrix(st.m_w[l]);
    w.matrix(st.v_w[l]);
    w.vector(st.m_b[l]);
    w.vector(st.v_b[l]);
  }
}

void read_adam(Reader& r, nn::AdamState& st) {
  st.cfg.lr = r.f64();
  st.cfg.beta1 = r.f64();
  st.cfg.beta2 = r.f64();
  st.cfg.eps = r.f64();
  st.step = r.i64();
  for (std::size_t l = 0; l < st.m_w.size(); ++l) {
    r.matrix(st.m_w[l]);
    r.matrix(st.v_w[l]);
    r.vector(st.m_b[l]);
    r.vector(st.v_b[l]);
  }
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const std::vector<AgentNets>& nets) {
  if (nets.empty()) throw std::invalid_argument("checkpoint: no agents to save");
  Writer w(path);
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(nets.size()));
  write_spec(w, nets[0].actor.spec);
  write_spec(w, nets[0].critic.spec);
  for (const auto& an : nets) {
    write_mlp(w, an.actor);
    write_mlp(w, an.critic);
    write_mlp(w, an.target_actor);
    write_mlp(w, an.target_critic);
    write_adam(w, an.actor_opt);
    write_adam(w, an.critic_opt);
  }
  w.commit();
}

std::vector<AgentNets> load_checkpoint(const std::filesystem::path& path) {
  Reader r(path);
  char magic[8];
  r.bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw std::runtime_error("checkpoint: bad magic in " + path.string());
  }
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw std::runtime_error("checkpoint: unsupported format version " +
                             std::to_string(version));
  }
  const std::uint32_t n = r.u32();
  if (n == 0 || n > 4096) throw std::runtime_error("checkpoint: bad agent count");
  const nn::MlpSpec actor_spec = read_spec(r);
  const nn::MlpSpec critic_spec = read_spec(r);

  std::vector<AgentNets> nets;
  nets.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    AgentNets an;
    an.actor = nn::make_mlp(actor_spec);
    an.critic = nn::make_mlp(critic_spec);
    an.target_actor = nn::make_mlp(actor_spec);
    an.target_critic = nn::make_mlp(critic_spec);
    an.actor_opt = nn::make_adam(an.actor);
    an.critic_opt = nn::make_adam(an.critic);
    read_mlp(r, an.actor);
    read_mlp(r, an.critic);
    read_mlp(r, an.target_actor);
    read_mlp(r, an.target_critic);
    read_adam(r, an.actor_opt);
    read_adam(r, an.critic_opt);
    nets.push_back(std::move(an));
  }
  if (!r.at_end()) throw std::runtime_error("checkpoint: trailing bytes in " + path.string());
  return nets;
}

}  // namespace swarmcov::learner
