#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dqnav/frames.hpp"
#include "dqnav/rng.hpp"

namespace dqnav {

// One replay record: (S_t, a_t, r_t, S_t+1, terminal).
struct Transition {
  FrameStack state;
  int action = 0;
  double reward = 0.0;
  FrameStack next_state;
  bool terminal = false;
};

// Fixed-capacity ring with FIFO eviction and uniform with-replacement
// minibatch sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity) : capacity_(capacity) {
    if (capacity == 0) fail(ErrorKind::invalid_argument, "replay capacity must be > 0");
  }

  size_t capacity() const { return capacity_; }
  size_t size() const { return ring_.size(); }

  void push(Transition t) {
    if (ring_.size() < capacity_) {
      ring_.push_back(std::move(t));
    } else {
      ring_[cursor_] = std::move(t);
    }
    cursor_ = (cursor_ + 1) % capacity_;
  }

  const Transition& at(size_t i) const { return ring_[i]; }

  // Empty result = not ready; the caller skips this training state.
  std::optional<std::vector<const Transition*>> sample(size_t batch_size,
                                                       size_t min_size,
                                                       Rng& rng) const {
    if (ring_.size() < min_size || ring_.empty()) return std::nullopt;
    std::vector<const Transition*> batch;
    batch.reserve(batch_size);
    for (size_t i = 0; i < batch_size; ++i)
      batch.push_back(&ring_[rng.uniform_index(ring_.size())]);
    return batch;
  }

 private:
  size_t capacity_;
  size_t cursor_ = 0;
  std::vector<Transition> ring_;
};

}  // namespace dqnav
