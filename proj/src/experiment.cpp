#include "dqnav/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>

namespace dqnav {

PhaseMetrics aggregate_metrics(const std::vector<FlightRecord>& records,
                               uint64_t flights_trained) {
  if (records.empty())
    fail(ErrorKind::invalid_argument, "aggregate_metrics: no flights");
  PhaseMetrics m;
  m.flights_trained = flights_trained;
  m.test_flights = records.size();

  uint64_t collisions = 0;
  std::vector<double> per_flight;
  per_flight.reserve(records.size());
  for (const FlightRecord& r : records) {
    if (r.collided) ++collisions;
    per_flight.push_back(r.total_reward / static_cast<double>(r.steps));
  }
  m.collision_pct = 100.0 * static_cast<double>(collisions) /
                    static_cast<double>(records.size());

  double mean = 0.0;
  for (double v : per_flight) mean += v;
  mean /= static_cast<double>(per_flight.size());
  m.avg_reward_per_step = mean;

  if (per_flight.size() > 1) {
    double ss = 0.0;
    for (double v : per_flight) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(per_flight.size() - 1));
    m.reward_stderr = sd / std::sqrt(static_cast<double>(per_flight.size()));
  }
  return m;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string metrics_csv_header() {
  return "phase,flights_trained,test_flights,collision_pct,avg_reward_per_step,"
         "reward_stderr,seed\n";
}

std::string metrics_csv_row(uint64_t phase, const PhaseMetrics& m, uint64_t seed) {
  return std::to_string(phase) + "," + std::to_string(m.flights_trained) + "," +
         std::to_string(m.test_flights) + "," + fmt_double(m.collision_pct) + "," +
         fmt_double(m.avg_reward_per_step) + "," + fmt_double(m.reward_stderr) + "," +
         std::to_string(seed) + "\n";
}

Session::Session(const RunConfig& cfg, World train_world,
                 std::optional<World> test_world)
    : cfg_(cfg),
      train_world_(std::move(train_world)),
      test_world_(test_world ? std::move(*test_world) : train_world_),
      net_(qnet_layer_specs(cfg.network.fc_hidden, kNumActions),
           cfg.network.frame_size, cfg.network.frame_size, cfg.network.stack_frames),
      agent_(cfg.agent, net_, cfg.seed) {
  cfg_.validate();
  train_world_.validate();
  test_world_.validate();
}

FlightRecord Session::run_flight(FlightMode mode, uint64_t flight_seed) {
  const World& world = mode == FlightMode::train ? train_world_ : test_world_;
  Rng rng(flight_seed);

  QuadState state{spawn_start(world.spawn, rng), 0.0};
  double d_last = distance_to_goal(state.position, world.goal);

  FlightRecord rec;
  rec.start_goal_distance = d_last;

  auto observe = [&]() {
    return std::make_shared<const Frame>(preprocess(
        render_depth(world, state, cfg_.camera), world.far_clip,
        cfg_.network.frame_size));
  };
  FrameStack stack = FrameStack::initial(observe(), cfg_.network.stack_frames);

  for (uint64_t step = 0; step < cfg_.experiment.max_steps_per_flight; ++step) {
    int action = kForwardAction;
    switch (mode) {
      case FlightMode::train:
        action = agent_.act(stack.to_input(), agent_.epsilon_now(), rng);
        break;
      case FlightMode::greedy:
        action = agent_.act(stack.to_input(), 0.0, rng);
        break;
      case FlightMode::random:
        action = static_cast<int>(rng.uniform_index(kNumActions));
        break;
    }
    const FrameStack prev_stack = stack;

    const TurnCommand nav = heading_to_goal(state.position, state.yaw_deg, world.goal);
    state = apply_action(state, action, nav, cfg_.motion);

    const bool collided = check_collision(world, state, cfg_.motion.collision_radius);
    const double d_now = distance_to_goal(state.position, world.goal);
    const bool reached = !collided && d_now <= cfg_.motion.goal_threshold;
    const double r =
        reward(d_last, d_now, collided, cfg_.experiment.collision_penalty);

    rec.rewards.push_back(r);
    rec.total_reward += r;
    rec.end_goal_distance = d_now;
    d_last = d_now;

    stack.push(observe());
    const bool terminal = collided || reached;
    if (mode == FlightMode::train)
      agent_.observe({prev_stack, action, r, stack, terminal});

    if (terminal) {
      rec.collided = collided;
      rec.reached_goal = reached;
      break;
    }
  }
  rec.steps = rec.rewards.size();
  rec.truncated = !rec.collided && !rec.reached_goal;
  return rec;
}

PhaseMetrics Session::evaluate(FlightMode mode, uint64_t n, uint64_t stream_tag,
                               uint64_t phase) {
  if (n == 0) fail(ErrorKind::invalid_argument, "evaluate: flight count must be > 0");
  std::vector<FlightRecord> records;
  records.reserve(n);
  for (uint64_t i = 0; i < n; ++i)
    records.push_back(
        run_flight(mode, derive_seed(cfg_.seed, {stream_tag, phase, i})));
  return aggregate_metrics(records, flights_trained_);
}

std::vector<PhaseMetrics> Session::training_loop(const std::string& out_dir,
                                                 TrainObserver* observer) {
  namespace fs = std::filesystem;
  std::ofstream csv;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    csv.open(fs::path(out_dir) / "metrics.csv", std::ios::trunc);
    if (!csv) fail(ErrorKind::io, "cannot write metrics.csv under " + out_dir);
    csv << metrics_csv_header();
    csv.flush();
  }

  AgentHooks hooks;
  if (observer) {
    hooks.on_train = [observer](uint64_t step, double loss) {
      observer->on_train(step, loss);
    };
    hooks.on_sync = [observer](uint64_t step) { observer->on_sync(step); };
  }
  agent_.set_hooks(hooks);

  std::vector<PhaseMetrics> all;
  uint64_t phase = 0;
  for (uint64_t flight = 1; flight <= cfg_.experiment.total_train_flights; ++flight) {
    run_flight(FlightMode::train,
               derive_seed(cfg_.seed, {stream::train_flight, flight}));
    ++flights_trained_;

    if (flight % cfg_.experiment.train_flights_per_phase == 0) {
      ++phase;
      if (!out_dir.empty()) {
        const std::string path =
            (fs::path(out_dir) / ("ckpt_f" + std::to_string(flight) + ".dqnav"))
                .string();
        agent_.save_checkpoint(path);
        if (observer) observer->on_checkpoint(flight, path);
      }
      const PhaseMetrics m =
          evaluate(FlightMode::greedy, cfg_.experiment.test_flights_per_phase,
                   stream::test_flight, phase);
      all.push_back(m);
      if (observer) observer->on_phase(phase, m);
      if (csv.is_open()) {
        csv << metrics_csv_row(phase, m, cfg_.seed);
        csv.flush();
      }
    }
  }
  return all;
}

World resolve_test_world(const RunConfig& cfg, const World& train_world) {
  if (cfg.experiment.test_world.empty()) return train_world;
  return load_world(cfg.experiment.test_world);
}

}  // namespace dqnav
