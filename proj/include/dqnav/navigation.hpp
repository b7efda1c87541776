#pragma once

#include <cmath>

#include "dqnav/actions.hpp"
#include "dqnav/geometry.hpp"

namespace dqnav {

// Turn command in degrees, wrapped to (-180, 180]; positive is right
// (clockwise seen from above, NED).
struct TurnCommand {
  double degrees = 0.0;
};

// Wraps any finite angle into (-180, 180]; the -180 boundary maps to +180.
inline double wrap_angle(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r <= -180.0) r += 360.0;
  else if (r > 180.0) r -= 360.0;
  return r;
}

// Turn that points the quadcopter at the goal's horizontal bearing; the
// straight line to the goal is the shortest path. Altitude is left to the
// collision-avoidance policy.
inline TurnCommand heading_to_goal(const Vec3& pos, double yaw_deg, const Vec3& goal) {
  const double dy = goal.y - pos.y;
  const double dx = goal.x - pos.x;
  if (dx == 0.0 && dy == 0.0) return {0.0};
  const double bearing = rad_to_deg(std::atan2(dy, dx));
  return {wrap_angle(bearing - yaw_deg)};
}

// Degree fusion: the policy's turn is added directly to the navigation
// turn.
inline TurnCommand combine_turn(TurnCommand nav, int action, double turn_small = 5.0,
                                double turn_large = 15.0) {
  return {wrap_angle(nav.degrees + action_spec(action, turn_small, turn_large).turn_deg)};
}

}  // namespace dqnav
