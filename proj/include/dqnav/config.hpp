#pragma once

#include <cstdint>
#include <string>

#include "dqnav/agent.hpp"
#include "dqnav/camera.hpp"
#include "dqnav/world.hpp"

namespace dqnav {

struct NetworkConfig {
  int frame_size = 80;   // preprocessed depth frames are frame_size^2
  int stack_frames = 4;  // state depth S_t
  int fc_hidden = 512;

  void validate() const {
    if (frame_size < 8) fail(ErrorKind::invalid_argument, "network.frame_size must be >= 8");
    if (stack_frames < 1) fail(ErrorKind::invalid_argument, "network.stack_frames must be >= 1");
    if (fc_hidden < 1) fail(ErrorKind::invalid_argument, "network.fc_hidden must be >= 1");
  }
};

struct ExperimentConfig {
  uint64_t train_flights_per_phase = 100;
  uint64_t test_flights_per_phase = 1000;
  uint64_t total_train_flights = 500;
  uint64_t max_steps_per_flight = 400;
  double collision_penalty = 50.0;
  std::string test_world;  // empty: test in the training world (fresh spawns)

  void validate() const {
    if (train_flights_per_phase == 0 || test_flights_per_phase == 0 ||
        total_train_flights == 0 || max_steps_per_flight == 0)
      fail(ErrorKind::invalid_argument, "experiment counts must be > 0");
    if (collision_penalty < 0.0)
      fail(ErrorKind::invalid_argument, "experiment.collision_penalty must be >= 0");
  }
};

// Whole-run configuration; every paper constant is a named field and the
// defaults reproduce the paper protocol, so an empty JSON object is a
// valid config.
struct RunConfig {
  uint64_t seed = 1;
  AgentConfig agent;
  NetworkConfig network;
  MotionConfig motion;
  CameraModel camera;
  ExperimentConfig experiment;

  void validate() const;
};

RunConfig default_config();
RunConfig parse_config_json(const std::string& text, const std::string& origin);
RunConfig load_config(const std::string& path);

// Full echo of a config; reloadable as a config file.
std::string config_to_json(const RunConfig& cfg);

// Run manifest: the config echo plus the resolved seed and version.
std::string manifest_json(const RunConfig& cfg, const std::string& world_path);

}  // namespace dqnav
