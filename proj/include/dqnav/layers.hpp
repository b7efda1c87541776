#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "dqnav/tensor.hpp"

namespace dqnav {

enum class LayerKind { conv, maxpool, relu, flatten, dense };

inline const char* layer_kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::conv: return "conv";
    case LayerKind::maxpool: return "maxpool";
    case LayerKind::relu: return "relu";
    case LayerKind::flatten: return "flatten";
    case LayerKind::dense: return "dense";
  }
  return "?";
}

struct LayerSpec {
  LayerKind kind = LayerKind::relu;
  int kernel = 0;          // conv, maxpool
  int stride = 1;          // conv, maxpool
  int out_channels = 0;    // conv
  bool same_padding = true;  // conv, maxpool
  int width = 0;           // dense output width

  static LayerSpec conv2d(int kernel, int stride, int out_channels,
                          bool same_padding = true) {
    if (kernel < 1 || stride < 1 || out_channels < 1)
      fail(ErrorKind::invalid_argument, "conv spec: kernel, stride and filters must be >= 1");
    return {LayerKind::conv, kernel, stride, out_channels, same_padding, 0};
  }
  static LayerSpec maxpool(int kernel, int stride, bool same_padding = true) {
    if (kernel < 1 || stride < 1)
      fail(ErrorKind::invalid_argument, "maxpool spec: kernel and stride must be >= 1");
    return {LayerKind::maxpool, kernel, stride, 0, same_padding, 0};
  }
  static LayerSpec relu() { return {LayerKind::relu, 0, 1, 0, true, 0}; }
  static LayerSpec flatten() { return {LayerKind::flatten, 0, 1, 0, true, 0}; }
  static LayerSpec dense(int width) {
    if (width < 1) fail(ErrorKind::invalid_argument, "dense spec: width must be >= 1");
    return {LayerKind::dense, 0, 1, 0, true, width};
  }
};

// "same" padding: output dim = ceil(in / stride), zero filled, split
// low/high with the extra cell on the high side.
struct PadPlan {
  int out = 0;
  int pad_low = 0;
};

inline PadPlan pad_plan(int in, int kernel, int stride, bool same_padding) {
  PadPlan p;
  if (same_padding) {
    p.out = (in + stride - 1) / stride;
    int total = std::max((p.out - 1) * stride + kernel - in, 0);
    p.pad_low = total / 2;
  } else {
    if (in < kernel) fail(ErrorKind::shape_mismatch, "input smaller than kernel without padding");
    p.out = (in - kernel) / stride + 1;
    p.pad_low = 0;
  }
  return p;
}

// Cross-correlation plus bias. Kernel layout is (ky, kx, in_ch, out_ch)
// so the innermost accumulation runs over contiguous output channels.
template <typename T>
Tensor3<T> conv2d_forward(const Tensor3<T>& input, const ParamTensor<T>& kernel,
                          const ParamTensor<T>& bias, int stride,
                          bool same_padding) {
  if (kernel.shape.size() != 4)
    fail(ErrorKind::shape_mismatch, "conv kernel must have rank 4");
  const int kh = kernel.shape[0], kw = kernel.shape[1];
  const int cin = kernel.shape[2], cout = kernel.shape[3];
  if (cin != input.channels)
    fail(ErrorKind::shape_mismatch,
         "conv: kernel input channels " + std::to_string(cin) +
             " != input channels " + std::to_string(input.channels));
  if (static_cast<int>(bias.size()) != cout)
    fail(ErrorKind::shape_mismatch, "conv: bias length != filter count");

  const PadPlan py = pad_plan(input.height, kh, stride, same_padding);
  const PadPlan px = pad_plan(input.width, kw, stride, same_padding);
  Tensor3<T> out(py.out, px.out, cout);

  const T* in = input.data.data();
  const T* w = kernel.data.data();
  T* o = out.data.data();
  for (int oy = 0; oy < py.out; ++oy) {
    const int iy0 = oy * stride - py.pad_low;
    for (int ox = 0; ox < px.out; ++ox) {
      const int ix0 = ox * stride - px.pad_low;
      T* acc = o + (static_cast<size_t>(oy) * px.out + ox) * cout;
      for (int c = 0; c < cout; ++c) acc[c] = bias.data[c];
      const int ky_lo = std::max(0, -iy0), ky_hi = std::min(kh, input.height - iy0);
      const int kx_lo = std::max(0, -ix0), kx_hi = std::min(kw, input.width - ix0);
      for (int ky = ky_lo; ky < ky_hi; ++ky) {
        const int iy = iy0 + ky;
        for (int kx = kx_lo; kx < kx_hi; ++kx) {
          const int ix = ix0 + kx;
          const T* ip = in + (static_cast<size_t>(iy) * input.width + ix) * cin;
          const T* wp = w + (static_cast<size_t>(ky) * kw + kx) * cin * cout;
          for (int ic = 0; ic < cin; ++ic) {
            const T v = ip[ic];
            const T* wrow = wp + static_cast<size_t>(ic) * cout;
            for (int c = 0; c < cout; ++c) acc[c] += v * wrow[c];
          }
        }
      }
    }
  }
  return out;
}

template <typename T>
struct ConvGrads {
  ParamTensor<T> kernel;
  ParamTensor<T> bias;
  Tensor3<T> input;
};

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor3<T>& input, const ParamTensor<T>& kernel,
                             int stride, bool same_padding,
                             const Tensor3<T>& out_grad) {
  const int kh = kernel.shape[0], kw = kernel.shape[1];
  const int cin = kernel.shape[2], cout = kernel.shape[3];
  const PadPlan py = pad_plan(input.height, kh, stride, same_padding);
  const PadPlan px = pad_plan(input.width, kw, stride, same_padding);

  ConvGrads<T> g;
  g.kernel = {kernel.name, kernel.shape, std::vector<T>(kernel.data.size(), T(0))};
  g.bias = {kernel.name + "_bias", {cout}, std::vector<T>(cout, T(0))};
  g.input = Tensor3<T>(input.height, input.width, input.channels);

  const T* in = input.data.data();
  const T* w = kernel.data.data();
  const T* og = out_grad.data.data();
  T* gw = g.kernel.data.data();
  T* gi = g.input.data.data();
  for (int oy = 0; oy < py.out; ++oy) {
    const int iy0 = oy * stride - py.pad_low;
    for (int ox = 0; ox < px.out; ++ox) {
      const int ix0 = ox * stride - px.pad_low;
      const T* gout = og + (static_cast<size_t>(oy) * px.out + ox) * cout;
      for (int c = 0; c < cout; ++c) g.bias.data[c] += gout[c];
      const int ky_lo = std::max(0, -iy0), ky_hi = std::min(kh, input.height - iy0);
      const int kx_lo = std::max(0, -ix0), kx_hi = std::min(kw, input.width - ix0);
      for (int ky = ky_lo; ky < ky_hi; ++ky) {
        const int iy = iy0 + ky;
        for (int kx = kx_lo; kx < kx_hi; ++kx) {
          const int ix = ix0 + kx;
          const size_t in_off = (static_cast<size_t>(iy) * input.width + ix) * cin;
          const size_t w_off = (static_cast<size_t>(ky) * kw + kx) * cin * cout;
          for (int ic = 0; ic < cin; ++ic) {
            const T v = in[in_off + ic];
            T* gwrow = gw + w_off + static_cast<size_t>(ic) * cout;
            for (int c = 0; c < cout; ++c) gwrow[c] += v * gout[c];
          }
          for (int ic = 0; ic < cin; ++ic) {
            const T* wrow = w + w_off + static_cast<size_t>(ic) * cout;
            T acc = T(0);
            for (int c = 0; c < cout; ++c) acc += wrow[c] * gout[c];
            gi[in_off + ic] += acc;
          }
        }
      }
    }
  }
  return g;
}

// Max over each window, with padded cells participating as zeros. Ties
// resolve to the lowest (row, col) index in the window; a padded cell that
// wins carries no argmax, so no gradient flows. Argmax (flat input index)
// is recorded per output cell for the backward pass.
template <typename T>
Tensor3<T> maxpool_forward(const Tensor3<T>& input, int kernel, int stride,
                           bool same_padding, std::vector<int32_t>* argmax) {
  const PadPlan py = pad_plan(input.height, kernel, stride, same_padding);
  const PadPlan px = pad_plan(input.width, kernel, stride, same_padding);
  const int c = input.channels;
  Tensor3<T> out(py.out, px.out, c);
  if (argmax) argmax->assign(out.size(), -1);

  for (int oy = 0; oy < py.out; ++oy) {
    const int iy0 = oy * stride - py.pad_low;
    for (int ox = 0; ox < px.out; ++ox) {
      const int ix0 = ox * stride - px.pad_low;
      const size_t out_off = (static_cast<size_t>(oy) * px.out + ox) * c;
      for (int ch = 0; ch < c; ++ch) {
        T best = T(0);
        int32_t best_idx = -1;
        bool first = true;
        for (int iy = iy0; iy < iy0 + kernel; ++iy) {
          for (int ix = ix0; ix < ix0 + kernel; ++ix) {
            const bool in_bounds = iy >= 0 && iy < input.height && ix >= 0 &&
                                   ix < input.width;
            const T v = in_bounds
                            ? input.data[(static_cast<size_t>(iy) * input.width + ix) * c + ch]
                            : T(0);
            if (first || v > best) {
              best = v;
              best_idx = in_bounds
                             ? static_cast<int32_t>((static_cast<size_t>(iy) * input.width + ix) * c + ch)
                             : -1;
              first = false;
            }
          }
        }
        out.data[out_off + ch] = best;
        if (argmax) (*argmax)[out_off + ch] = best_idx;
      }
    }
  }
  return out;
}

template <typename T>
Tensor3<T> maxpool_backward(const Tensor3<T>& input, const std::vector<int32_t>& argmax,
                            const Tensor3<T>& out_grad) {
  Tensor3<T> gi(input.height, input.width, input.channels);
  for (size_t i = 0; i < out_grad.size(); ++i) {
    const int32_t src = argmax[i];
    if (src >= 0) gi.data[src] += out_grad.data[i];
  }
  return gi;
}

template <typename T>
Tensor3<T> relu_forward(const Tensor3<T>& input) {
  Tensor3<T> out = input;
  for (T& v : out.data) v = std::max(v, T(0));
  return out;
}

template <typename T>
Tensor3<T> relu_backward(const Tensor3<T>& input, const Tensor3<T>& out_grad) {
  Tensor3<T> gi(input.height, input.width, input.channels);
  for (size_t i = 0; i < input.size(); ++i)
    gi.data[i] = input.data[i] > T(0) ? out_grad.data[i] : T(0);
  return gi;
}

// y = W x + b with W stored row-major (out, in).
template <typename T>
Tensor3<T> dense_forward(const Tensor3<T>& input, const ParamTensor<T>& weights,
                         const ParamTensor<T>& bias) {
  if (weights.shape.size() != 2)
    fail(ErrorKind::shape_mismatch, "dense weights must have rank 2");
  const int out_n = weights.shape[0], in_n = weights.shape[1];
  if (static_cast<int>(input.size()) != in_n)
    fail(ErrorKind::shape_mismatch,
         "dense: weight columns " + std::to_string(in_n) + " != input length " +
             std::to_string(input.size()));
  if (static_cast<int>(bias.size()) != out_n)
    fail(ErrorKind::shape_mismatch, "dense: bias length != output width");

  Tensor3<T> out(1, 1, out_n);
  const T* x = input.data.data();
  for (int r = 0; r < out_n; ++r) {
    const T* wrow = weights.data.data() + static_cast<size_t>(r) * in_n;
    T acc = bias.data[r];
    for (int i = 0; i < in_n; ++i) acc += wrow[i] * x[i];
    out.data[r] = acc;
  }
  return out;
}

template <typename T>
struct DenseGrads {
  ParamTensor<T> weights;
  ParamTensor<T> bias;
  Tensor3<T> input;
};

template <typename T>
DenseGrads<T> dense_backward(const Tensor3<T>& input, const ParamTensor<T>& weights,
                             const Tensor3<T>& out_grad) {
  const int out_n = weights.shape[0], in_n = weights.shape[1];
  DenseGrads<T> g;
  g.weights = {weights.name, weights.shape, std::vector<T>(weights.data.size(), T(0))};
  g.bias = {weights.name + "_bias", {out_n}, std::vector<T>(out_grad.data.begin(), out_grad.data.end())};
  g.input = Tensor3<T>(input.height, input.width, input.channels);

  const T* x = input.data.data();
  T* gi = g.input.data.data();
  for (int r = 0; r < out_n; ++r) {
    const T go = out_grad.data[r];
    const T* wrow = weights.data.data() + static_cast<size_t>(r) * in_n;
    T* gwrow = g.weights.data.data() + static_cast<size_t>(r) * in_n;
    for (int i = 0; i < in_n; ++i) {
      gwrow[i] += go * x[i];
      gi[i] += go * wrow[i];
    }
  }
  return g;
}

}  // namespace dqnav
