#pragma once

#include <cstdint>

#include "dqnav/error.hpp"

namespace dqnav {

// Linear exploration anneal: eps_start at step 0 down to eps_end at
// anneal_steps, clamped afterwards.
struct EpsilonSchedule {
  double eps_start = 0.1;
  double eps_end = 0.001;
  uint64_t anneal_steps = 100000;

  void validate() const {
    if (!(eps_start >= eps_end && eps_end > 0.0) || eps_start > 1.0)
      fail(ErrorKind::invalid_argument,
           "epsilon schedule requires eps_start >= eps_end > 0 and eps_start <= 1");
    if (anneal_steps == 0)
      fail(ErrorKind::invalid_argument, "epsilon schedule requires anneal_steps > 0");
  }
};

inline double epsilon_at(const EpsilonSchedule& s, uint64_t step) {
  if (step == 0) return s.eps_start;
  if (step >= s.anneal_steps) return s.eps_end;
  const double frac = static_cast<double>(step) / static_cast<double>(s.anneal_steps);
  return s.eps_start + (s.eps_end - s.eps_start) * frac;
}

}  // namespace dqnav
