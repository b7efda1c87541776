// Command-line front end. Links the C API only, as any external client
// would.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "dqnav.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;  // gradient check / divergence
constexpr int kExitUsage = 2;         // bad flags or unreadable inputs

int exit_code_for(dqnav_status s) {
  switch (s) {
    case DQNAV_OK: return kExitOk;
    case DQNAV_ERR_DIVERGED:
    case DQNAV_ERR_VERIFICATION: return kExitVerification;
    default: return kExitUsage;
  }
}

int report_failure(dqnav_status s) {
  std::fprintf(stderr, "error: %s\n", dqnav_last_error());
  return exit_code_for(s);
}

struct ConfigHandle {
  dqnav_config* ptr = nullptr;
  ~ConfigHandle() { dqnav_config_free(ptr); }
};

struct WorldHandle {
  dqnav_world* ptr = nullptr;
  ~WorldHandle() { dqnav_world_free(ptr); }
};

void print_metrics_header() {
  std::printf(
      "phase,flights_trained,test_flights,collision_pct,avg_reward_per_step,"
      "reward_stderr,seed\n");
}

void print_metrics_row(uint64_t phase, const dqnav_metrics& m, uint64_t seed) {
  std::printf("%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%.10g,%.10g,%.10g,%" PRIu64 "\n",
              phase, m.flights_trained, m.test_flights, m.collision_pct,
              m.avg_reward_per_step, m.reward_stderr, seed);
  std::fflush(stdout);
}

int run_train(const std::string& config_path, const std::string& world_path,
              const std::string& out_dir, bool seed_set, uint64_t seed) {
  ConfigHandle cfg;
  dqnav_status s = config_path.empty() ? dqnav_config_create(&cfg.ptr)
                                       : dqnav_config_load(config_path.c_str(), &cfg.ptr);
  if (s != DQNAV_OK) return report_failure(s);
  if (seed_set) dqnav_config_set_seed(cfg.ptr, seed);

  WorldHandle world;
  s = dqnav_world_load(world_path.c_str(), &world.ptr);
  if (s != DQNAV_OK) return report_failure(s);

  print_metrics_header();
  struct Ctx {
    uint64_t seed;
  } ctx{dqnav_config_seed(cfg.ptr)};
  s = dqnav_train_run(
      cfg.ptr, world.ptr, world_path.c_str(), out_dir.c_str(),
      [](uint64_t phase, const dqnav_metrics* m, void* user) {
        print_metrics_row(phase, *m, static_cast<Ctx*>(user)->seed);
      },
      &ctx);
  if (s != DQNAV_OK) return report_failure(s);
  return kExitOk;
}

int run_eval(const std::string& ckpt_path, const std::string& world_path,
             const std::string& config_path, uint64_t flights, uint64_t seed,
             bool random_policy, const std::string& csv_path) {
  ConfigHandle cfg;
  dqnav_status s = config_path.empty() ? dqnav_config_create(&cfg.ptr)
                                       : dqnav_config_load(config_path.c_str(), &cfg.ptr);
  if (s != DQNAV_OK) return report_failure(s);

  WorldHandle world;
  s = dqnav_world_load(world_path.c_str(), &world.ptr);
  if (s != DQNAV_OK) return report_failure(s);

  dqnav_metrics m{};
  s = random_policy
          ? dqnav_eval_random(cfg.ptr, world.ptr, flights, seed, &m)
          : dqnav_eval_checkpoint(cfg.ptr, ckpt_path.c_str(), world.ptr, flights,
                                  seed, &m);
  if (s != DQNAV_OK) return report_failure(s);

  print_metrics_header();
  print_metrics_row(1, m, seed);
  if (!csv_path.empty()) {
    std::FILE* f = std::fopen(csv_path.c_str(), "w");
    if (!f) {
      std::fprintf(stderr, "error: cannot write %s\n", csv_path.c_str());
      return kExitUsage;
    }
    std::fprintf(f,
                 "phase,flights_trained,test_flights,collision_pct,"
                 "avg_reward_per_step,reward_stderr,seed\n");
    std::fprintf(f, "1,%" PRIu64 ",%" PRIu64 ",%.10g,%.10g,%.10g,%" PRIu64 "\n",
                 m.flights_trained, m.test_flights, m.collision_pct,
                 m.avg_reward_per_step, m.reward_stderr, seed);
    std::fclose(f);
  }
  return kExitOk;
}

int run_render(const std::string& world_path, double x, double y, double z,
               double yaw, const std::string& out_path) {
  WorldHandle world;
  dqnav_status s = dqnav_world_load(world_path.c_str(), &world.ptr);
  if (s != DQNAV_OK) return report_failure(s);
  s = dqnav_render_depth(nullptr, world.ptr, x, y, z, yaw, out_path.c_str());
  if (s != DQNAV_OK) return report_failure(s);
  return kExitOk;
}

int run_gradcheck(uint64_t seed, bool corrupt) {
  double max_rel = 0.0;
  const dqnav_status s = dqnav_gradcheck(
      seed, corrupt ? 1 : 0,
      [](const char* name, double err, uint64_t probes, uint64_t skipped, void*) {
        std::printf("%-16s max_rel_err %.3e  probes %" PRIu64 "  kink_skipped %" PRIu64 "\n",
                    name, err, probes, skipped);
      },
      nullptr, &max_rel);
  std::printf("overall max_rel_err %.3e (%s)\n", max_rel,
              s == DQNAV_OK ? "PASS" : "FAIL");
  if (s != DQNAV_OK && s != DQNAV_ERR_VERIFICATION) return report_failure(s);
  return s == DQNAV_OK ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("dqnav ") + dqnav_version() +
               " - quadcopter navigation-assistance trainer"};
  app.require_subcommand(1);

  // train
  std::string config_path, world_path, out_dir;
  uint64_t seed = 0;
  auto* train = app.add_subcommand("train", "run the training protocol");
  train->add_option("--config", config_path, "config JSON (defaults when omitted)");
  train->add_option("--world", world_path, "world JSON")->required();
  train->add_option("--out", out_dir, "output directory")->required();
  auto* train_seed = train->add_option("--seed", seed, "master seed override");

  // eval
  std::string ckpt_path, eval_csv;
  uint64_t flights = 1000;
  uint64_t eval_seed = 1;
  bool random_policy = false;
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval->add_option("--ckpt", ckpt_path, "checkpoint file");
  eval->add_option("--world", world_path, "world JSON")->required();
  eval->add_option("--config", config_path, "config JSON (defaults when omitted)");
  eval->add_option("--flights", flights, "number of test flights");
  eval->add_option("--seed", eval_seed, "evaluation seed");
  eval->add_option("--csv", eval_csv, "also write the metrics row to this CSV");
  eval->add_flag("--random", random_policy,
                 "uniform-random-action baseline instead of a checkpoint");

  // render
  double px = 0.0, py = 0.0, pz = -2.0, yaw = 0.0;
  std::string render_out;
  auto* render = app.add_subcommand("render", "write one depth frame as 16-bit PGM");
  render->add_option("--world", world_path, "world JSON")->required();
  render->add_option("--x", px, "camera x (m, NED)");
  render->add_option("--y", py, "camera y (m, NED)");
  render->add_option("--z", pz, "camera z (m, NED; negative above ground)");
  render->add_option("--yaw", yaw, "camera yaw (degrees)");
  render->add_option("--out", render_out, "output PGM path")->required();

  // gradcheck
  uint64_t gc_seed = 1;
  bool corrupt = false;
  auto* gradcheck = app.add_subcommand("gradcheck",
                                       "finite-difference check of backpropagation");
  gradcheck->add_option("--seed", gc_seed, "seed for the random network and input");
  gradcheck->add_flag("--corrupt", corrupt,
                      "deliberately corrupt one gradient tensor (self-test)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (train->parsed())
    return run_train(config_path, world_path, out_dir, !train_seed->empty(), seed);
  if (eval->parsed()) {
    if (!random_policy && ckpt_path.empty()) {
      std::fprintf(stderr, "error: eval requires --ckpt (or --random)\n");
      return kExitUsage;
    }
    return run_eval(ckpt_path, world_path, config_path, flights, eval_seed,
                    random_policy, eval_csv);
  }
  if (render->parsed()) return run_render(world_path, px, py, pz, yaw, render_out);
  if (gradcheck->parsed()) return run_gradcheck(gc_seed, corrupt);
  return kExitUsage;
}
