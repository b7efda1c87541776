#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace dqnav {

// splitmix64 finalizer; used both as a mixer for deriving stream seeds and
// as the state update of the generator itself.
constexpr uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d549fb133111ebull;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a master seed and a list of
// integer tags (stream kind, flight index, ...). Every consumer of
// randomness gets its own stream so results do not depend on the order
// in which other parts of a run draw numbers.
constexpr uint64_t derive_seed(uint64_t master, std::initializer_list<uint64_t> tags) {
  uint64_t s = master ^ 0xa0761d6478bd642full;
  for (uint64_t t : tags) {
    s ^= t + 0x9e3779b97f4a7c15ull + (s << 6) + (s >> 2);
    uint64_t st = s;
    s = splitmix64(st);
  }
  return s;
}

// Small deterministic generator. The sequence is fully specified here so
// frozen test values stay valid regardless of the standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  uint64_t uniform_index(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<__uint128_t>(next_u64()) * n) >> 64);
  }

  // standard normal via Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Stream tags used throughout the trainer; kept in one place so the
// derivations are easy to audit.
namespace stream {
constexpr uint64_t init_params = 1;
constexpr uint64_t train_flight = 2;
constexpr uint64_t test_flight = 3;
constexpr uint64_t minibatch = 4;
constexpr uint64_t baseline_flight = 5;
}  // namespace stream

}  // namespace dqnav
