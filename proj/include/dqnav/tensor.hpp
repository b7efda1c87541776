#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dqnav/error.hpp"

namespace dqnav {

// Dense rank-3 tensor in row-major (height, width, channels) order.
// Vectors are represented as 1x1xN so the whole layer chain can pass a
// single type around.
template <typename T>
struct Tensor3 {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<T> data;

  Tensor3() = default;
  Tensor3(int h, int w, int c)
      : height(h), width(w), channels(c),
        data(static_cast<size_t>(h) * w * c, T(0)) {}
  Tensor3(int h, int w, int c, std::vector<T> values)
      : height(h), width(w), channels(c), data(std::move(values)) {
    if (data.size() != static_cast<size_t>(h) * w * c)
      fail(ErrorKind::shape_mismatch, "tensor data length does not match dims");
  }

  static Tensor3 vector(std::vector<T> values) {
    int n = static_cast<int>(values.size());
    return Tensor3(1, 1, n, std::move(values));
  }

  size_t size() const { return data.size(); }

  T& at(int y, int x, int c) {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  T at(int y, int x, int c) const {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }

  bool same_shape(const Tensor3& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }

  bool all_finite() const {
    for (T v : data)
      if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
  }
};

// One named parameter tensor (conv kernel, bias vector, dense matrix).
template <typename T>
struct ParamTensor {
  std::string name;
  std::vector<int> shape;
  std::vector<T> data;

  size_t size() const { return data.size(); }
};

template <typename T>
size_t shape_count(const std::vector<int>& shape) {
  size_t n = 1;
  for (int d : shape) n *= static_cast<size_t>(d);
  return n;
}

// Ordered list of named tensors. Gradients use the same representation,
// shape-matched entry for entry.
template <typename T>
struct NetworkParams {
  std::vector<ParamTensor<T>> tensors;

  ParamTensor<T>& at(size_t i) { return tensors[i]; }
  const ParamTensor<T>& at(size_t i) const { return tensors[i]; }
  size_t count() const { return tensors.size(); }

  const ParamTensor<T>* find(const std::string& name) const {
    for (const auto& t : tensors)
      if (t.name == name) return &t;
    return nullptr;
  }

  bool shape_matches(const NetworkParams& o) const {
    if (tensors.size() != o.tensors.size()) return false;
    for (size_t i = 0; i < tensors.size(); ++i)
      if (tensors[i].shape != o.tensors[i].shape) return false;
    return true;
  }

  bool all_finite() const {
    for (const auto& t : tensors)
      for (T v : t.data)
        if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
  }

  bool operator==(const NetworkParams& o) const {
    if (tensors.size() != o.tensors.size()) return false;
    for (size_t i = 0; i < tensors.size(); ++i) {
      if (tensors[i].name != o.tensors[i].name) return false;
      if (tensors[i].shape != o.tensors[i].shape) return false;
      if (tensors[i].data != o.tensors[i].data) return false;
    }
    return true;
  }
};

template <typename T>
using GradientSet = NetworkParams<T>;

// dst += scale * src, entry for entry.
template <typename T>
void add_scaled(NetworkParams<T>& dst, const NetworkParams<T>& src, T scale) {
  if (!dst.shape_matches(src))
    fail(ErrorKind::shape_mismatch, "parameter/gradient shape mismatch");
  for (size_t i = 0; i < dst.tensors.size(); ++i) {
    auto& d = dst.tensors[i].data;
    const auto& s = src.tensors[i].data;
    for (size_t j = 0; j < d.size(); ++j) d[j] += scale * s[j];
  }
}

// params' = params - lr * grads
template <typename T>
void sgd_step(NetworkParams<T>& params, const GradientSet<T>& grads, T lr) {
  if (lr < T(0)) fail(ErrorKind::invalid_argument, "sgd_step: negative learning rate");
  add_scaled(params, grads, -lr);
}

template <typename T>
NetworkParams<T> zeros_like(const NetworkParams<T>& params) {
  NetworkParams<T> out;
  out.tensors.reserve(params.tensors.size());
  for (const auto& t : params.tensors)
    out.tensors.push_back({t.name, t.shape, std::vector<T>(t.data.size(), T(0))});
  return out;
}

}  // namespace dqnav
