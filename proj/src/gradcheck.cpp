#include "dqnav/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace dqnav {

namespace {

// Activation decisions made during a forward pass: ReLU signs and pool
// argmax picks. Two evaluations with equal signatures lie in the same
// linear region.
struct ActivationSignature {
  std::vector<std::vector<bool>> relu_active;
  std::vector<std::vector<int32_t>> pool_argmax;

  bool operator==(const ActivationSignature&) const = default;
};

ActivationSignature signature_of(const Network<double>& net,
                                 const ForwardCache<double>& cache) {
  ActivationSignature sig;
  const auto& specs = net.specs();
  for (size_t li = 0; li < specs.size(); ++li) {
    if (specs[li].kind == LayerKind::relu) {
      const Tensor3<double>& x = cache.inputs[li];
      std::vector<bool> act(x.size());
      for (size_t i = 0; i < x.size(); ++i) act[i] = x.data[i] > 0.0;
      sig.relu_active.push_back(std::move(act));
    } else if (specs[li].kind == LayerKind::maxpool) {
      sig.pool_argmax.push_back(cache.pool_argmax[li]);
    }
  }
  return sig;
}

double loss_of(const std::vector<double>& out, const std::vector<double>& coeffs) {
  double l = 0.0;
  for (size_t i = 0; i < out.size(); ++i) l += coeffs[i] * out[i];
  return l;
}

}  // namespace

FdReport fd_check(const Network<double>& net, uint64_t seed, const FdOptions& opts) {
  NetworkParams<double> params = net.init_params(derive_seed(seed, {1}));

  Rng in_rng(derive_seed(seed, {2}));
  Tensor3<double> input(net.input_height(), net.input_width(), net.input_channels());
  for (auto& v : input.data) v = in_rng.uniform();

  Rng c_rng(derive_seed(seed, {3}));
  std::vector<double> coeffs(static_cast<size_t>(net.output_width()));
  for (auto& c : coeffs)
    c = (c_rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.5 + c_rng.uniform());

  ForwardCache<double> cache;
  net.forward(params, input, &cache);
  GradientSet<double> analytic =
      net.backward(params, cache, std::span<const double>(coeffs));
  if (opts.inject_fault && !analytic.tensors.empty())
    for (auto& v : analytic.tensors.front().data) v *= 1.02;

  const double h = opts.perturbation;
  FdReport report;
  for (size_t ti = 0; ti < params.count(); ++ti) {
    ParamTensor<double>& t = params.at(ti);
    TensorCheck check;
    check.name = t.name;

    const size_t size = t.data.size();
    const size_t n_probes = std::min<size_t>(size, static_cast<size_t>(opts.probes_per_tensor));
    for (size_t p = 0; p < n_probes; ++p) {
      const size_t base = p * size / n_probes;
      bool measured = false;
      // a probe that straddles an activation boundary moves to a neighbor
      for (size_t attempt = 0; attempt < 4 && !measured; ++attempt) {
        const size_t idx = (base + attempt) % size;
        const double saved = t.data[idx];

        ForwardCache<double> cache_hi, cache_lo;
        t.data[idx] = saved + h;
        const double f_hi = loss_of(net.forward(params, input, &cache_hi), coeffs);
        t.data[idx] = saved - h;
        const double f_lo = loss_of(net.forward(params, input, &cache_lo), coeffs);
        t.data[idx] = saved;

        if (!(signature_of(net, cache_hi) == signature_of(net, cache_lo))) {
          ++check.kink_skipped;
          continue;
        }
        const double fd = (f_hi - f_lo) / (2.0 * h);
        const double ga = analytic.at(ti).data[idx];
        const double diff = std::abs(ga - fd);
        const double rel =
            diff <= opts.atol ? 0.0 : diff / std::max(std::abs(ga), std::abs(fd));
        check.max_rel_err = std::max(check.max_rel_err, rel);
        ++check.probes;
        measured = true;
      }
    }
    report.max_rel_err = std::max(report.max_rel_err, check.max_rel_err);
    report.tensors.push_back(std::move(check));
  }
  report.pass = report.max_rel_err < opts.rtol;
  return report;
}

FdReport gradcheck_canonical(uint64_t seed, const FdOptions& opts) {
  const Network<double> net(qnet_layer_specs(512, 13), 80, 80, 4);
  return fd_check(net, seed, opts);
}

}  // namespace dqnav
