#include "dqnav/world.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dqnav/error.hpp"

namespace dqnav {

using nlohmann::json;

void World::validate() const {
  if (far_clip <= 0.0) fail(ErrorKind::invalid_argument, "world: far_clip must be > 0");
  for (size_t i = 0; i < obstacles.size(); ++i) {
    const Box& b = obstacles[i];
    if (!(b.min.x < b.max.x && b.min.y < b.max.y && b.min.z < b.max.z))
      fail(ErrorKind::invalid_argument,
           "world: box " + std::to_string(i) + " must have min < max per axis");
  }
  if (spawn.y_sigma < 0.0)
    fail(ErrorKind::invalid_argument, "world: spawn y_sigma must be >= 0");
}

namespace {

Vec3 vec3_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3)
    fail(ErrorKind::bad_format, what + " must be a [x, y, z] array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

World parse_world_json(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::bad_format, origin + ": " + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::bad_format, origin + ": world must be a JSON object");

  World w;
  try {
    w.ground_z = j.value("ground_z", 0.0);
    w.far_clip = j.value("far_clip", 100.0);
    if (!j.contains("goal")) fail(ErrorKind::bad_format, origin + ": missing \"goal\"");
    w.goal = vec3_from(j["goal"], origin + ": goal");
    if (j.contains("spawn")) {
      const json& s = j["spawn"];
      w.spawn.x = s.value("x", 0.0);
      w.spawn.y_sigma = s.value("y_sigma", 5.0);
      w.spawn.z = s.value("z", -2.0);
    }
    for (const json& b : j.value("boxes", json::array())) {
      w.obstacles.push_back({vec3_from(b.at("min"), origin + ": box min"),
                             vec3_from(b.at("max"), origin + ": box max")});
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::bad_format, origin + ": " + e.what());
  }
  w.validate();
  return w;
}

World load_world(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::io, "cannot open world file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_world_json(ss.str(), path);
}

std::string world_to_json(const World& w) {
  json j;
  j["ground_z"] = w.ground_z;
  j["far_clip"] = w.far_clip;
  j["goal"] = {w.goal.x, w.goal.y, w.goal.z};
  j["spawn"] = {{"x", w.spawn.x}, {"y_sigma", w.spawn.y_sigma}, {"z", w.spawn.z}};
  j["boxes"] = json::array();
  for (const Box& b : w.obstacles)
    j["boxes"].push_back({{"min", {b.min.x, b.min.y, b.min.z}},
                          {"max", {b.max.x, b.max.y, b.max.z}}});
  return j.dump(2) + "\n";
}

double point_box_distance(const Vec3& p, const Box& b) {
  const double dx = std::max({b.min.x - p.x, 0.0, p.x - b.max.x});
  const double dy = std::max({b.min.y - p.y, 0.0, p.y - b.max.y});
  const double dz = std::max({b.min.z - p.z, 0.0, p.z - b.max.z});
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void MotionConfig::validate() const {
  if (forward_step <= 0.0 || climb_step < 0.0)
    fail(ErrorKind::invalid_argument, "motion: forward_step must be > 0 and climb_step >= 0");
  if (turn_small < 0.0 || turn_large < 0.0)
    fail(ErrorKind::invalid_argument, "motion: turn magnitudes must be >= 0");
  if (collision_radius <= 0.0)
    fail(ErrorKind::invalid_argument, "motion: collision_radius must be > 0");
  if (goal_threshold <= 0.0)
    fail(ErrorKind::invalid_argument, "motion: goal_threshold must be > 0");
}

bool check_collision(const World& w, const QuadState& s, double radius) {
  if (radius <= 0.0) fail(ErrorKind::invalid_argument, "collision radius must be > 0");
  // ground plane: z grows downward, so at-or-below-ground is z >= ground_z
  if (w.ground_z - s.position.z <= radius) return true;
  for (const Box& b : w.obstacles)
    if (point_box_distance(s.position, b) <= radius) return true;
  return false;
}

}  // namespace dqnav
