#include "swarmcov/replay.hpp"

#include <stdexcept>

namespace swarmcov::learner {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay: capacity must be > 0");
  ring_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
  if (size_ < capacity_) {
    ring_.push_back(std::move(t));
    ++size_;
  } else {
    ring_[cursor_] = std::move(t);
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch, Rng& rng) const {
  if (size_ < batch) throw std::runtime_error("replay: not enough transitions to sample");
  std::vector<const Transition*> out;
  out.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    out.push_back(&ring_[rng.index(size_)]);
  }
  return out;
}

const Transition& ReplayBuffer::at(std::size_t k) const {
  if (k >= size_) throw std::out_of_range("replay: index past size");
  if (size_ < capacity_) return ring_[k];
  return ring_[(cursor_ + k) % capacity_];
}

}  // namespace swarmcov::learner
