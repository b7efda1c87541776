#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dqnav/layers.hpp"
#include "dqnav/rng.hpp"
#include "dqnav/tensor.hpp"

namespace dqnav {

template <typename T>
struct ForwardCache {
  // inputs[i] is the tensor fed into layer i; outputs holds the final vector
  std::vector<Tensor3<T>> inputs;
  std::vector<std::vector<int32_t>> pool_argmax;  // indexed by layer
  Tensor3<T> output;
  bool valid = false;
};

// A fixed feed-forward chain of conv / maxpool / relu / flatten / dense
// layers. The instance owns only the layer plan; parameters travel
// separately so two networks (value and target) can share one plan.
template <typename T>
class Network {
 public:
  Network(std::vector<LayerSpec> specs, int in_h, int in_w, int in_c)
      : specs_(std::move(specs)), in_h_(in_h), in_w_(in_w), in_c_(in_c) {
    plan();
  }

  const std::vector<LayerSpec>& specs() const { return specs_; }
  int input_height() const { return in_h_; }
  int input_width() const { return in_w_; }
  int input_channels() const { return in_c_; }
  int output_width() const { return out_c_; }
  // width of the flatten stage, 0 if the chain has none
  int flatten_width() const { return flatten_width_; }

  // He-scaled uniform kernels/weights (+-sqrt(6/fan_in)), zero biases.
  // Tensors are filled in order from a single stream, so a seed pins every
  // value.
  NetworkParams<T> init_params(uint64_t seed) const {
    NetworkParams<T> p = make_zero_params();
    Rng rng(seed);
    for (auto& t : p.tensors) {
      if (t.name.ends_with("/bias")) continue;
      const int fan_in = t.name.starts_with("conv")
                             ? t.shape[0] * t.shape[1] * t.shape[2]
                             : t.shape[1];
      const double bound = std::sqrt(6.0 / fan_in);
      for (auto& v : t.data) v = static_cast<T>(rng.uniform(-bound, bound));
    }
    return p;
  }

  NetworkParams<T> make_zero_params() const {
    NetworkParams<T> p;
    int conv_i = 0, dense_i = 0;
    Shape s{in_h_, in_w_, in_c_};
    for (const auto& spec : specs_) {
      if (spec.kind == LayerKind::conv) {
        ++conv_i;
        const std::string base = "conv" + std::to_string(conv_i);
        p.tensors.push_back({base + "/kernel",
                             {spec.kernel, spec.kernel, s.c, spec.out_channels},
                             std::vector<T>(static_cast<size_t>(spec.kernel) * spec.kernel * s.c * spec.out_channels, T(0))});
        p.tensors.push_back({base + "/bias", {spec.out_channels},
                             std::vector<T>(spec.out_channels, T(0))});
      } else if (spec.kind == LayerKind::dense) {
        ++dense_i;
        const std::string base = "fc" + std::to_string(dense_i);
        const int in_n = s.h * s.w * s.c;
        p.tensors.push_back({base + "/weight", {spec.width, in_n},
                             std::vector<T>(static_cast<size_t>(spec.width) * in_n, T(0))});
        p.tensors.push_back({base + "/bias", {spec.width},
                             std::vector<T>(spec.width, T(0))});
      }
      s = advance(s, spec);
    }
    return p;
  }

  // Runs the chain and returns the output vector (the 13 Q-values for the
  // canonical plan). Pass a cache to enable backward().
  std::vector<T> forward(const NetworkParams<T>& params, const Tensor3<T>& input,
                         ForwardCache<T>* cache = nullptr) const {
    check_params(params);
    if (input.height != in_h_ || input.width != in_w_ || input.channels != in_c_)
      fail(ErrorKind::shape_mismatch,
           "network input must be " + std::to_string(in_h_) + "x" +
               std::to_string(in_w_) + "x" + std::to_string(in_c_) + ", got " +
               std::to_string(input.height) + "x" + std::to_string(input.width) +
               "x" + std::to_string(input.channels));
    if (cache) {
      cache->inputs.clear();
      cache->pool_argmax.assign(specs_.size(), {});
      cache->valid = false;
    }

    Tensor3<T> x = input;
    size_t pi = 0;
    for (size_t li = 0; li < specs_.size(); ++li) {
      const LayerSpec& spec = specs_[li];
      if (cache) cache->inputs.push_back(x);
      switch (spec.kind) {
        case LayerKind::conv: {
          const ParamTensor<T>& k = params.at(pi++);
          const ParamTensor<T>& b = params.at(pi++);
          x = conv2d_forward(x, k, b, spec.stride, spec.same_padding);
          break;
        }
        case LayerKind::maxpool: {
          std::vector<int32_t> argmax;
          x = maxpool_forward(x, spec.kernel, spec.stride, spec.same_padding,
                              cache ? &argmax : nullptr);
          if (cache) cache->pool_argmax[li] = std::move(argmax);
          break;
        }
        case LayerKind::relu:
          x = relu_forward(x);
          break;
        case LayerKind::flatten: {
          const int n = static_cast<int>(x.size());
          x = Tensor3<T>(1, 1, n, std::move(x.data));
          break;
        }
        case LayerKind::dense: {
          const ParamTensor<T>& w = params.at(pi++);
          const ParamTensor<T>& b = params.at(pi++);
          x = dense_forward(x, w, b);
          break;
        }
      }
    }
    if (cache) {
      cache->output = x;
      cache->valid = true;
    }
    return x.data;
  }

  // Exact gradients of a scalar loss w.r.t. every parameter, given
  // dLoss/dOutput. Requires a cache produced by forward().
  GradientSet<T> backward(const NetworkParams<T>& params, const ForwardCache<T>& cache,
                          std::span<const T> out_grad) const {
    if (!cache.valid)
      fail(ErrorKind::bad_state, "backward called without a cached forward pass");
    if (static_cast<int>(out_grad.size()) != out_c_)
      fail(ErrorKind::shape_mismatch, "output gradient length != network output width");

    GradientSet<T> grads = make_zero_params();
    Tensor3<T> g(1, 1, out_c_, std::vector<T>(out_grad.begin(), out_grad.end()));
    size_t pi = params.count();
    for (size_t li = specs_.size(); li-- > 0;) {
      const LayerSpec& spec = specs_[li];
      const Tensor3<T>& x = cache.inputs[li];
      switch (spec.kind) {
        case LayerKind::conv: {
          const ParamTensor<T>& b [[maybe_unused]] = params.at(--pi);
          const ParamTensor<T>& k = params.at(--pi);
          ConvGrads<T> cg = conv2d_backward(x, k, spec.stride, spec.same_padding, g);
          grads.at(pi).data = std::move(cg.kernel.data);
          grads.at(pi + 1).data = std::move(cg.bias.data);
          g = std::move(cg.input);
          break;
        }
        case LayerKind::maxpool:
          g = maxpool_backward(x, cache.pool_argmax[li], g);
          break;
        case LayerKind::relu:
          g = relu_backward(x, g);
          break;
        case LayerKind::flatten: {
          std::vector<T> gd = std::move(g.data);
          g = Tensor3<T>(x.height, x.width, x.channels, std::move(gd));
          break;
        }
        case LayerKind::dense: {
          --pi;  // bias
          const ParamTensor<T>& w = params.at(--pi);
          DenseGrads<T> dg = dense_backward(x, w, g);
          grads.at(pi).data = std::move(dg.weights.data);
          grads.at(pi + 1).data = std::move(dg.bias.data);
          g = std::move(dg.input);
          break;
        }
      }
    }
    return grads;
  }

 private:
  struct Shape {
    int h, w, c;
  };

  Shape advance(Shape s, const LayerSpec& spec) const {
    switch (spec.kind) {
      case LayerKind::conv: {
        PadPlan py = pad_plan(s.h, spec.kernel, spec.stride, spec.same_padding);
        PadPlan px = pad_plan(s.w, spec.kernel, spec.stride, spec.same_padding);
        return {py.out, px.out, spec.out_channels};
      }
      case LayerKind::maxpool: {
        PadPlan py = pad_plan(s.h, spec.kernel, spec.stride, spec.same_padding);
        PadPlan px = pad_plan(s.w, spec.kernel, spec.stride, spec.same_padding);
        return {py.out, px.out, s.c};
      }
      case LayerKind::relu:
        return s;
      case LayerKind::flatten:
        return {1, 1, s.h * s.w * s.c};
      case LayerKind::dense:
        if (s.h != 1 || s.w != 1)
          fail(ErrorKind::shape_mismatch, "dense layer requires a flattened input");
        return {1, 1, spec.width};
    }
    return s;
  }

  void plan() {
    Shape s{in_h_, in_w_, in_c_};
    int param_tensors = 0;
    for (size_t li = 0; li < specs_.size(); ++li) {
      const LayerSpec& spec = specs_[li];
      if (spec.kind == LayerKind::flatten) flatten_width_ = s.h * s.w * s.c;
      try {
        s = advance(s, spec);
      } catch (const Error& e) {
        fail(ErrorKind::shape_mismatch,
             "layer " + std::to_string(li) + " (" + layer_kind_name(spec.kind) +
                 "): " + e.what());
      }
      if (spec.kind == LayerKind::conv || spec.kind == LayerKind::dense)
        param_tensors += 2;
    }
    if (s.h != 1 || s.w != 1)
      fail(ErrorKind::shape_mismatch, "network must end in a flat vector");
    out_c_ = s.c;
    param_tensor_count_ = param_tensors;
  }

  void check_params(const NetworkParams<T>& params) const {
    if (static_cast<int>(params.count()) != param_tensor_count_)
      fail(ErrorKind::shape_mismatch,
           "parameter set has " + std::to_string(params.count()) +
               " tensors, plan needs " + std::to_string(param_tensor_count_));
  }

  std::vector<LayerSpec> specs_;
  int in_h_, in_w_, in_c_;
  int out_c_ = 0;
  int flatten_width_ = 0;
  int param_tensor_count_ = 0;
};

// The collision-avoidance network: three conv+relu+pool stages, then two
// dense layers. With 80x80xS input the flatten stage is 10*10*16 = 1600.
inline std::vector<LayerSpec> qnet_layer_specs(int fc_hidden, int num_actions) {
  return {
      LayerSpec::conv2d(8, 2, 32), LayerSpec::relu(), LayerSpec::maxpool(2, 1),
      LayerSpec::conv2d(4, 2, 64), LayerSpec::relu(), LayerSpec::maxpool(2, 1),
      LayerSpec::conv2d(3, 2, 16), LayerSpec::relu(), LayerSpec::maxpool(2, 1),
      LayerSpec::flatten(),
      LayerSpec::dense(fc_hidden), LayerSpec::relu(),
      LayerSpec::dense(num_actions),
  };
}

}  // namespace dqnav
