#pragma once

#include "swarmcov/rng.hpp"

#include <Eigen/Dense>

#include <vector>

namespace swarmcov::learner {

// One joint experience record (x, a, r, x'): joint observation, joint action,
// per-agent reward vector, next joint observation.
struct Transition {
  Eigen::VectorXd x;
  Eigen::VectorXd a;
  Eigen::VectorXd r;
  Eigen::VectorXd x_next;
};

// FIFO ring of transitions sampled uniformly with replacement.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::vector<const Transition*> sample(std::size_t batch, Rng& rng) const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  // k-th oldest record still stored
  const Transition& at(std::size_t k) const;

 private:
  std::size_t capacity_;
  std::size_t size_ = 0;
  std::size_t cursor_ = 0;
  std::vector<Transition> ring_;
};

}  // namespace swarmcov::learner
