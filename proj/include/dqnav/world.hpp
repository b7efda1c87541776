#pragma once

#include <string>
#include <vector>

#include "dqnav/geometry.hpp"
#include "dqnav/navigation.hpp"
#include "dqnav/rng.hpp"

namespace dqnav {

struct Box {
  Vec3 min;
  Vec3 max;
};

// Start randomization: (x, N(0, y_sigma), z). The paper flies from
// (0, N(0, 5), -2).
struct SpawnSpec {
  double x = 0.0;
  double y_sigma = 5.0;
  double z = -2.0;
};

struct QuadState {
  Vec3 position;
  double yaw_deg = 0.0;  // wrapped to (-180, 180]
};

// Static obstacle course: axis-aligned boxes over a ground plane, one goal
// point, one spawn distribution. Immutable after load; queries are pure.
struct World {
  std::vector<Box> obstacles;
  double ground_z = 0.0;
  Vec3 goal;
  SpawnSpec spawn;
  double far_clip = 100.0;

  void validate() const;
};

World load_world(const std::string& path);
World parse_world_json(const std::string& text, const std::string& origin);
std::string world_to_json(const World& w);

// Euclidean distance to the closest point of the box (0 inside).
double point_box_distance(const Vec3& p, const Box& b);

// True iff the collision sphere of the given radius touches any obstacle
// or the ground plane.
bool check_collision(const World& w, const QuadState& s, double radius);

inline double distance_to_goal(const Vec3& p, const Vec3& goal) {
  return (p - goal).norm();
}

inline bool reached_goal(const QuadState& s, const World& w, double threshold) {
  return distance_to_goal(s.position, w.goal) <= threshold;
}

inline Vec3 spawn_start(const SpawnSpec& spec, Rng& rng) {
  return {spec.x, rng.normal(0.0, spec.y_sigma), spec.z};
}

struct MotionConfig {
  double forward_step = 1.0;  // meters per action
  double climb_step = 0.5;    // meters up/down per altitude action
  double turn_small = 5.0;
  double turn_large = 15.0;
  double collision_radius = 0.3;
  double goal_threshold = 2.0;

  void validate() const;
};

// Kinematic step: yaw picks up the fused turn (navigation offset plus the
// action's own turn), then the position advances forward_step along the
// new heading; up/down actions shift z by climb_step (up is -z in NED).
inline QuadState apply_action(const QuadState& s, int action, TurnCommand nav_offset,
                              const MotionConfig& cfg) {
  const ActionSpec a = action_spec(action, cfg.turn_small, cfg.turn_large);
  QuadState out;
  out.yaw_deg = wrap_angle(s.yaw_deg + nav_offset.degrees + a.turn_deg);
  const double yaw_rad = deg_to_rad(out.yaw_deg);
  out.position = s.position +
                 Vec3{std::cos(yaw_rad), std::sin(yaw_rad), 0.0} * cfg.forward_step;
  if (a.altitude == Altitude::up) out.position.z -= cfg.climb_step;
  else if (a.altitude == Altitude::down) out.position.z += cfg.climb_step;
  return out;
}

}  // namespace dqnav
