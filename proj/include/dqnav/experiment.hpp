#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dqnav/agent.hpp"
#include "dqnav/camera.hpp"
#include "dqnav/config.hpp"
#include "dqnav/world.hpp"

namespace dqnav {

// R = (D_last - D_now) - penalty * [collision]: positive when the action
// brought the quadcopter closer to the goal without hitting anything.
inline double reward(double d_last, double d_now, bool collided,
                     double penalty = 50.0) {
  if (d_last < 0.0 || d_now < 0.0)
    fail(ErrorKind::invalid_argument, "reward: distances must be >= 0");
  return (d_last - d_now) - (collided ? penalty : 0.0);
}

// One flight from spawn to collision, goal arrival or truncation; exactly
// one of the three flags is set at termination.
struct FlightRecord {
  uint64_t steps = 0;
  double total_reward = 0.0;
  bool collided = false;
  bool reached_goal = false;
  bool truncated = false;
  std::vector<double> rewards;
  double start_goal_distance = 0.0;
  double end_goal_distance = 0.0;
};

struct PhaseMetrics {
  uint64_t flights_trained = 0;
  uint64_t test_flights = 0;
  double collision_pct = 0.0;
  double avg_reward_per_step = 0.0;
  double reward_stderr = 0.0;
};

PhaseMetrics aggregate_metrics(const std::vector<FlightRecord>& records,
                               uint64_t flights_trained);

std::string metrics_csv_header();
std::string metrics_csv_row(uint64_t phase, const PhaseMetrics& m, uint64_t seed);

enum class FlightMode {
  train,   // epsilon-greedy, transitions recorded, learning cadence active
  greedy,  // epsilon = 0, agent untouched
  random,  // uniform random actions, agent untouched
};

struct TrainObserver {
  virtual ~TrainObserver() = default;
  virtual void on_train(uint64_t global_step, double loss) { (void)global_step, (void)loss; }
  virtual void on_sync(uint64_t global_step) { (void)global_step; }
  virtual void on_checkpoint(uint64_t flights, const std::string& path) {
    (void)flights, (void)path;
  }
  virtual void on_phase(uint64_t phase, const PhaseMetrics& m) { (void)phase, (void)m; }
};

// Owns the world pair, the network plan and the agent; drives flights and
// the paper's training/testing protocol.
class Session {
 public:
  Session(const RunConfig& cfg, World train_world,
          std::optional<World> test_world = std::nullopt);

  const RunConfig& config() const { return cfg_; }
  Agent& agent() { return agent_; }
  const Agent& agent() const { return agent_; }
  const Network<float>& net() const { return net_; }
  const World& train_world() const { return train_world_; }
  const World& test_world() const { return test_world_; }
  uint64_t flights_trained() const { return flights_trained_; }

  FlightRecord run_flight(FlightMode mode, uint64_t flight_seed);

  // n flights with a frozen policy; agent state is left untouched.
  // stream_tag picks the flight-seed stream (test_flight or
  // baseline_flight); phase separates repeated test phases.
  PhaseMetrics evaluate(FlightMode mode, uint64_t n, uint64_t stream_tag,
                        uint64_t phase);

  // The full protocol: train flights, and every train_flights_per_phase
  // flights write a checkpoint and run a test phase. Checkpoints land in
  // out_dir as ckpt_f{flights}.dqnav; metrics.csv gains one row per phase.
  // Pass an empty out_dir to skip writing files.
  std::vector<PhaseMetrics> training_loop(const std::string& out_dir,
                                          TrainObserver* observer = nullptr);

 private:
  RunConfig cfg_;
  World train_world_;
  World test_world_;
  Network<float> net_;
  Agent agent_;
  uint64_t flights_trained_ = 0;
};

// Loads cfg.experiment.test_world when set, else mirrors the training
// world.
World resolve_test_world(const RunConfig& cfg, const World& train_world);

}  // namespace dqnav
