#pragma once

#include <memory>
#include <vector>

#include "dqnav/error.hpp"
#include "dqnav/tensor.hpp"

namespace dqnav {

// One preprocessed depth frame: size x size floats in [0, 1].
struct Frame {
  int size = 0;
  std::vector<float> data;
};

using FramePtr = std::shared_ptr<const Frame>;

// Rolling queue of the last N preprocessed frames, newest last. Frames are
// shared by reference so consecutive stacks stored in the replay buffer
// cost one frame, not four.
class FrameStack {
 public:
  FrameStack() = default;

  static FrameStack initial(FramePtr first, int depth) {
    FrameStack s;
    s.frames_.assign(static_cast<size_t>(depth), std::move(first));
    return s;
  }

  void push(FramePtr frame) {
    if (frames_.empty()) fail(ErrorKind::bad_state, "push on an uninitialised frame stack");
    frames_.erase(frames_.begin());
    frames_.push_back(std::move(frame));
  }

  size_t depth() const { return frames_.size(); }
  const Frame& frame(size_t i) const { return *frames_[i]; }

  // Assembles the (size, size, depth) network input; channel c holds the
  // c-th oldest frame.
  Tensor3<float> to_input() const {
    const int n = frames_.front()->size;
    const int d = static_cast<int>(frames_.size());
    Tensor3<float> t(n, n, d);
    for (int c = 0; c < d; ++c) {
      const auto& f = frames_[c]->data;
      for (int i = 0; i < n * n; ++i) t.data[static_cast<size_t>(i) * d + c] = f[i];
    }
    return t;
  }

  bool operator==(const FrameStack& o) const {
    if (frames_.size() != o.frames_.size()) return false;
    for (size_t i = 0; i < frames_.size(); ++i)
      if (frames_[i]->data != o.frames_[i]->data) return false;
    return true;
  }

 private:
  std::vector<FramePtr> frames_;
};

}  // namespace dqnav
