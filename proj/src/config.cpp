#include "dqnav/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dqnav/version.hpp"

namespace dqnav {

using nlohmann::json;

void RunConfig::validate() const {
  agent.validate();
  network.validate();
  motion.validate();
  camera.validate();
  experiment.validate();
  if (static_cast<uint64_t>(agent.batch_size) > agent.replay_capacity)
    fail(ErrorKind::invalid_argument, "agent.batch_size exceeds agent.replay_capacity");
}

RunConfig default_config() { return RunConfig{}; }

namespace {

// Rejects unknown keys so a typo cannot silently fall back to a default.
void check_keys(const json& j, const std::string& origin, const std::string& scope,
                const std::set<std::string>& known) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key))
      fail(ErrorKind::invalid_argument,
           origin + ": unknown field \"" + (scope.empty() ? key : scope + "." + key) + "\"");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig parse_config_json(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::bad_format, origin + ": " + e.what());
  }
  if (!j.is_object())
    fail(ErrorKind::bad_format, origin + ": config must be a JSON object");

  RunConfig cfg;
  try {
    // "version" and "world" appear in run manifests; both are informative
    check_keys(j, origin, "",
               {"seed", "agent", "network", "motion", "camera", "experiment",
                "version", "world"});
    read(j, "seed", cfg.seed);
    if (j.contains("agent")) {
      const json& a = j["agent"];
      check_keys(a, origin, "agent",
                 {"gamma", "learning_rate", "batch_size", "train_every", "sync_every",
                  "replay_capacity", "min_replay_before_training", "eps_start",
                  "eps_end", "eps_anneal_steps"});
      read(a, "gamma", cfg.agent.gamma);
      read(a, "learning_rate", cfg.agent.learning_rate);
      read(a, "batch_size", cfg.agent.batch_size);
      read(a, "train_every", cfg.agent.train_every);
      read(a, "sync_every", cfg.agent.sync_every);
      read(a, "replay_capacity", cfg.agent.replay_capacity);
      read(a, "min_replay_before_training", cfg.agent.min_replay_before_training);
      read(a, "eps_start", cfg.agent.epsilon.eps_start);
      read(a, "eps_end", cfg.agent.epsilon.eps_end);
      read(a, "eps_anneal_steps", cfg.agent.epsilon.anneal_steps);
    }
    if (j.contains("network")) {
      const json& n = j["network"];
      check_keys(n, origin, "network", {"frame_size", "stack_frames", "fc_hidden"});
      read(n, "frame_size", cfg.network.frame_size);
      read(n, "stack_frames", cfg.network.stack_frames);
      read(n, "fc_hidden", cfg.network.fc_hidden);
    }
    if (j.contains("motion")) {
      const json& m = j["motion"];
      check_keys(m, origin, "motion",
                 {"forward_step", "climb_step", "turn_small", "turn_large",
                  "collision_radius", "goal_threshold"});
      read(m, "forward_step", cfg.motion.forward_step);
      read(m, "climb_step", cfg.motion.climb_step);
      read(m, "turn_small", cfg.motion.turn_small);
      read(m, "turn_large", cfg.motion.turn_large);
      read(m, "collision_radius", cfg.motion.collision_radius);
      read(m, "goal_threshold", cfg.motion.goal_threshold);
    }
    if (j.contains("camera")) {
      const json& c = j["camera"];
      check_keys(c, origin, "camera", {"width", "height", "hfov_deg"});
      read(c, "width", cfg.camera.width);
      read(c, "height", cfg.camera.height);
      read(c, "hfov_deg", cfg.camera.hfov_deg);
    }
    if (j.contains("experiment")) {
      const json& e = j["experiment"];
      check_keys(e, origin, "experiment",
                 {"train_flights_per_phase", "test_flights_per_phase",
                  "total_train_flights", "max_steps_per_flight", "collision_penalty",
                  "test_world"});
      read(e, "train_flights_per_phase", cfg.experiment.train_flights_per_phase);
      read(e, "test_flights_per_phase", cfg.experiment.test_flights_per_phase);
      read(e, "total_train_flights", cfg.experiment.total_train_flights);
      read(e, "max_steps_per_flight", cfg.experiment.max_steps_per_flight);
      read(e, "collision_penalty", cfg.experiment.collision_penalty);
      read(e, "test_world", cfg.experiment.test_world);
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_argument, origin + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::io, "cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_json(ss.str(), path);
}

namespace {

json config_json(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["agent"] = {{"gamma", cfg.agent.gamma},
                {"learning_rate", cfg.agent.learning_rate},
                {"batch_size", cfg.agent.batch_size},
                {"train_every", cfg.agent.train_every},
                {"sync_every", cfg.agent.sync_every},
                {"replay_capacity", cfg.agent.replay_capacity},
                {"min_replay_before_training", cfg.agent.min_replay_before_training},
                {"eps_start", cfg.agent.epsilon.eps_start},
                {"eps_end", cfg.agent.epsilon.eps_end},
                {"eps_anneal_steps", cfg.agent.epsilon.anneal_steps}};
  j["network"] = {{"frame_size", cfg.network.frame_size},
                  {"stack_frames", cfg.network.stack_frames},
                  {"fc_hidden", cfg.network.fc_hidden}};
  j["motion"] = {{"forward_step", cfg.motion.forward_step},
                 {"climb_step", cfg.motion.climb_step},
                 {"turn_small", cfg.motion.turn_small},
                 {"turn_large", cfg.motion.turn_large},
                 {"collision_radius", cfg.motion.collision_radius},
                 {"goal_threshold", cfg.motion.goal_threshold}};
  j["camera"] = {{"width", cfg.camera.width},
                 {"height", cfg.camera.height},
                 {"hfov_deg", cfg.camera.hfov_deg}};
  j["experiment"] = {{"train_flights_per_phase", cfg.experiment.train_flights_per_phase},
                     {"test_flights_per_phase", cfg.experiment.test_flights_per_phase},
                     {"total_train_flights", cfg.experiment.total_train_flights},
                     {"max_steps_per_flight", cfg.experiment.max_steps_per_flight},
                     {"collision_penalty", cfg.experiment.collision_penalty},
                     {"test_world", cfg.experiment.test_world}};
  return j;
}

}  // namespace

std::string config_to_json(const RunConfig& cfg) {
  return config_json(cfg).dump(2) + "\n";
}

std::string manifest_json(const RunConfig& cfg, const std::string& world_path) {
  json j = config_json(cfg);
  j["version"] = kVersion;
  j["world"] = world_path;
  return j.dump(2) + "\n";
}

}  // namespace dqnav
