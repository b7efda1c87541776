#pragma once

#include "dqnav/error.hpp"

namespace dqnav {

// 13 discrete flight actions: (altitude up/level/down) x (turn -15, -5,
// +5, +15 degrees) plus pure forward. Left turns are negative (NED,
// clockwise positive seen from above). Every action advances forward.
//
//   id = altitude * 4 + turn_index   for ids 0..11
//   id 12 = level, 0 degrees
inline constexpr int kNumActions = 13;
inline constexpr int kForwardAction = 12;

enum class Altitude { up, level, down };

struct ActionSpec {
  Altitude altitude;
  double turn_deg;
};

// turn_small/turn_large configure the two paper turn magnitudes (5 and 15
// degrees by default).
inline ActionSpec action_spec(int id, double turn_small = 5.0,
                              double turn_large = 15.0) {
  if (id < 0 || id >= kNumActions)
    fail(ErrorKind::invalid_argument, "action id out of range [0, 13)");
  if (id == kForwardAction) return {Altitude::level, 0.0};
  const double turns[4] = {-turn_large, -turn_small, turn_small, turn_large};
  return {static_cast<Altitude>(id / 4), turns[id % 4]};
}

}  // namespace dqnav
