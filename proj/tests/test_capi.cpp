#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dqnav.h"

namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
  auto dir = fs::temp_directory_path() / "dqnav_test_capi";
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = work_dir() / name;
  std::ofstream f(p, std::ios::trunc);
  f << text;
  return p;
}

const char* kTinyConfig = R"({
  "seed": 7,
  "network": {"frame_size": 16, "fc_hidden": 8},
  "camera": {"width": 64, "height": 36},
  "agent": {"batch_size": 4, "min_replay_before_training": 16,
            "train_every": 10, "sync_every": 20},
  "experiment": {"train_flights_per_phase": 3, "test_flights_per_phase": 3,
                 "total_train_flights": 6, "max_steps_per_flight": 25}
})";

const char* kTinyWorld = R"({
  "ground_z": 0.0, "far_clip": 100.0,
  "goal": [10.0, 0.0, -2.0],
  "spawn": {"x": 0.0, "y_sigma": 2.0, "z": -2.0},
  "boxes": [{"min": [6.0, -2.0, -6.0], "max": [7.0, 2.0, -0.5]}]
})";

}  // namespace

TEST_CASE("version and error strings are always available") {
  REQUIRE(dqnav_version() != nullptr);
  CHECK(std::string(dqnav_version()).starts_with("dqnav-"));
  REQUIRE(dqnav_last_error() != nullptr);
}

TEST_CASE("config handles: create, load, seed") {
  dqnav_config* cfg = nullptr;
  REQUIRE(dqnav_config_create(&cfg) == DQNAV_OK);
  REQUIRE(cfg != nullptr);
  CHECK(dqnav_config_set_seed(cfg, 99) == DQNAV_OK);
  CHECK(dqnav_config_seed(cfg) == 99);
  dqnav_config_free(cfg);

  CHECK(dqnav_config_load("/nonexistent/cfg.json", &cfg) == DQNAV_ERR_IO);
  CHECK(std::string(dqnav_last_error()).find("/nonexistent/cfg.json") !=
        std::string::npos);

  const auto bad = write_file("bad.json", "{broken");
  CHECK(dqnav_config_load(bad.string().c_str(), &cfg) == DQNAV_ERR_FORMAT);

  const auto invalid = write_file("invalid.json", R"({"agent":{"gamma": 2.0}})");
  CHECK(dqnav_config_load(invalid.string().c_str(), &cfg) ==
        DQNAV_ERR_INVALID_ARGUMENT);

  CHECK(dqnav_config_create(nullptr) == DQNAV_ERR_INVALID_ARGUMENT);
}

TEST_CASE("world handles and render") {
  dqnav_world* world = nullptr;
  CHECK(dqnav_world_load("/nonexistent/w.json", &world) == DQNAV_ERR_IO);

  const auto wpath = write_file("world.json", kTinyWorld);
  REQUIRE(dqnav_world_load(wpath.string().c_str(), &world) == DQNAV_OK);

  const fs::path pgm = work_dir() / "frame.pgm";
  REQUIRE(dqnav_render_depth(nullptr, world, 0.0, 0.0, -2.0, 0.0,
                             pgm.string().c_str()) == DQNAV_OK);
  std::ifstream f(pgm, std::ios::binary);
  std::string magic;
  f >> magic;
  CHECK(magic == "P5");

  CHECK(dqnav_render_depth(nullptr, world, 0, 0, -2, 0, "/nonexistent/dir/x.pgm") ==
        DQNAV_ERR_IO);
  dqnav_world_free(world);
}

TEST_CASE("train, evaluate and baseline through the C surface") {
  const auto cpath = write_file("config.json", kTinyConfig);
  const auto wpath = write_file("world.json", kTinyWorld);

  dqnav_config* cfg = nullptr;
  dqnav_world* world = nullptr;
  REQUIRE(dqnav_config_load(cpath.string().c_str(), &cfg) == DQNAV_OK);
  REQUIRE(dqnav_world_load(wpath.string().c_str(), &world) == DQNAV_OK);

  const fs::path out = work_dir() / "run";
  fs::remove_all(out);

  std::vector<uint64_t> phases;
  const dqnav_status s = dqnav_train_run(
      cfg, world, wpath.string().c_str(), out.string().c_str(),
      [](uint64_t phase, const dqnav_metrics* m, void* user) {
        auto* v = static_cast<std::vector<uint64_t>*>(user);
        v->push_back(phase);
        CHECK(m->test_flights == 3);
        CHECK(m->collision_pct >= 0.0);
        CHECK(m->collision_pct <= 100.0);
      },
      &phases);
  REQUIRE(s == DQNAV_OK);
  CHECK(phases == std::vector<uint64_t>{1, 2});
  CHECK(fs::exists(out / "metrics.csv"));
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(fs::exists(out / "ckpt_f3.dqnav"));
  CHECK(fs::exists(out / "ckpt_f6.dqnav"));

  dqnav_metrics m{};
  REQUIRE(dqnav_eval_checkpoint(cfg, (out / "ckpt_f6.dqnav").string().c_str(),
                                world, 5, 3, &m) == DQNAV_OK);
  CHECK(m.test_flights == 5);
  CHECK(m.collision_pct >= 0.0);

  // same call, same seed: identical metrics
  dqnav_metrics m2{};
  REQUIRE(dqnav_eval_checkpoint(cfg, (out / "ckpt_f6.dqnav").string().c_str(),
                                world, 5, 3, &m2) == DQNAV_OK);
  CHECK(m.collision_pct == m2.collision_pct);
  CHECK(m.avg_reward_per_step == m2.avg_reward_per_step);

  REQUIRE(dqnav_eval_random(cfg, world, 5, 3, &m) == DQNAV_OK);
  CHECK(m.test_flights == 5);

  // a corrupt checkpoint is a format error
  const auto junk = write_file("junk.dqnav", "not a checkpoint");
  CHECK(dqnav_eval_checkpoint(cfg, junk.string().c_str(), world, 2, 1, &m) ==
        DQNAV_ERR_FORMAT);

  dqnav_world_free(world);
  dqnav_config_free(cfg);
}

TEST_CASE("gradcheck reports every tensor and passes") {
  std::vector<std::string> names;
  double max_rel = -1.0;
  const dqnav_status s = dqnav_gradcheck(
      1, 0,
      [](const char* name, double, uint64_t probes, uint64_t, void* user) {
        static_cast<std::vector<std::string>*>(user)->push_back(name);
        CHECK(probes > 0);
      },
      &names, &max_rel);
  CHECK(s == DQNAV_OK);
  CHECK(max_rel >= 0.0);
  CHECK(max_rel < 1e-4);
  REQUIRE(names.size() == 10);
  CHECK(names[0] == "conv1/kernel");
  CHECK(names[9] == "fc2/bias");
}
