#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dqnav/network.hpp"

namespace dqnav {

struct FdOptions {
  double perturbation = 1e-4;
  double rtol = 1e-4;
  // below this absolute difference a probe counts as a match regardless of
  // magnitude (exact-zero gradients against finite-difference rounding)
  double atol = 1e-10;
  int probes_per_tensor = 32;
  bool inject_fault = false;  // test hook: scales one analytic gradient tensor
};

struct TensorCheck {
  std::string name;
  double max_rel_err = 0.0;
  uint64_t probes = 0;
  uint64_t kink_skipped = 0;
};

struct FdReport {
  std::vector<TensorCheck> tensors;
  double max_rel_err = 0.0;
  bool pass = false;
};

// Compares analytic backpropagation against central finite differences of
// a fixed random linear functional of the outputs, in double precision.
// Probes whose +-h interval crosses a ReLU or a max-pool decision boundary
// are skipped (the difference quotient is not a derivative estimate
// there); within one activation pattern the loss is linear in any single
// parameter, so surviving probes must agree to rounding.
FdReport fd_check(const Network<double>& net, uint64_t seed, const FdOptions& opts);

// The canonical 80x80x4 -> 13 chain.
FdReport gradcheck_canonical(uint64_t seed, const FdOptions& opts = {});

}  // namespace dqnav
