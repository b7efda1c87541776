// Exercises the installed binary end to end: flag parsing, exit codes and
// file outputs. argv[1] is the CLI path (wired up by CMake).
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dqnav/camera.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_cli;

fs::path work_dir() {
  auto dir = fs::temp_directory_path() / "dqnav_test_cli";
  fs::create_directories(dir);
  return dir;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const fs::path err = work_dir() / "stderr.txt";
  const std::string cmd =
      g_cli + " " + args + " >" + out.string() + " 2>" + err.string();
  const int rc = std::system(cmd.c_str());

  RunResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  };
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = work_dir() / name;
  std::ofstream f(p, std::ios::trunc);
  f << text;
  return p;
}

std::string slurp_bytes(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kTinyConfig = R"({
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

TEST_CASE("bad invocations exit 2") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("bogus-subcommand").exit_code == 2);
  CHECK(run_cli("train --world w.json").exit_code == 2);  // missing --out
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("train: a missing world file exits 2 and names the path") {
  const auto cfg = write_file("config.json", kTinyConfig);
  const RunResult r = run_cli("train --config " + cfg.string() +
                              " --world /nonexistent/w.json --out " +
                              (work_dir() / "x").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("/nonexistent/w.json") != std::string::npos);
}

TEST_CASE("train twice with one seed: byte-identical outputs; manifest feeds back") {
  const auto cfg = write_file("config.json", kTinyConfig);
  const auto world = write_file("world.json", kTinyWorld);
  const fs::path out1 = work_dir() / "run1";
  const fs::path out2 = work_dir() / "run2";
  fs::remove_all(out1);
  fs::remove_all(out2);

  const std::string base = "train --config " + cfg.string() + " --world " +
                           world.string() + " --seed 7 --out ";
  const RunResult r1 = run_cli(base + out1.string());
  REQUIRE(r1.exit_code == 0);
  CHECK(r1.out.find("phase,flights_trained") != std::string::npos);
  const RunResult r2 = run_cli(base + out2.string());
  REQUIRE(r2.exit_code == 0);

  CHECK(slurp_bytes(out1 / "metrics.csv") == slurp_bytes(out2 / "metrics.csv"));
  CHECK(slurp_bytes(out1 / "ckpt_f3.dqnav") == slurp_bytes(out2 / "ckpt_f3.dqnav"));
  CHECK(slurp_bytes(out1 / "ckpt_f6.dqnav") == slurp_bytes(out2 / "ckpt_f6.dqnav"));

  // the manifest alone reproduces the run
  const fs::path out3 = work_dir() / "run3";
  fs::remove_all(out3);
  const RunResult r3 = run_cli("train --config " + (out1 / "manifest.json").string() +
                               " --world " + world.string() + " --out " +
                               out3.string());
  REQUIRE(r3.exit_code == 0);
  CHECK(slurp_bytes(out1 / "metrics.csv") == slurp_bytes(out3 / "metrics.csv"));
}

TEST_CASE("eval: checkpoint, random baseline, corrupt input") {
  const auto cfg = write_file("config.json", kTinyConfig);
  const auto world = write_file("world.json", kTinyWorld);
  const fs::path ckpt = work_dir() / "run1" / "ckpt_f6.dqnav";
  if (!fs::exists(ckpt)) {
    REQUIRE(run_cli("train --config " + cfg.string() + " --world " + world.string() +
                    " --seed 7 --out " + (work_dir() / "run1").string())
                .exit_code == 0);
  }
  REQUIRE(fs::exists(ckpt));

  const fs::path csv = work_dir() / "eval.csv";
  const RunResult r =
      run_cli("eval --ckpt " + ckpt.string() + " --world " + world.string() +
              " --config " + cfg.string() + " --flights 4 --seed 3 --csv " +
              csv.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("phase,flights_trained") != std::string::npos);
  CHECK(fs::exists(csv));

  const RunResult rb = run_cli("eval --random --world " + world.string() +
                               " --config " + cfg.string() + " --flights 4");
  CHECK(rb.exit_code == 0);

  const auto junk = write_file("junk.dqnav", "garbage");
  const RunResult rc = run_cli("eval --ckpt " + junk.string() + " --world " +
                               world.string() + " --config " + cfg.string() +
                               " --flights 2");
  CHECK(rc.exit_code == 2);

  const RunResult rd = run_cli("eval --world " + world.string());
  CHECK(rd.exit_code == 2);  // neither --ckpt nor --random
}

TEST_CASE("render: wall distance shows up in the PGM") {
  const auto world = write_file("wall.json", R"({
    "goal": [50, 0, -2],
    "boxes": [{"min": [10.0, -60.0, -40.0], "max": [12.0, 60.0, -0.05]}]
  })");
  const fs::path pgm = work_dir() / "wall.pgm";
  const RunResult r = run_cli("render --world " + world.string() +
                              " --x 0 --y 0 --z -2 --yaw 0 --out " + pgm.string());
  REQUIRE(r.exit_code == 0);

  const dqnav::DepthImage img = dqnav::read_depth_pgm(pgm.string());
  CHECK(img.width == 256);
  CHECK(img.height == 144);
  CHECK(img.at(72, 128) == doctest::Approx(10.0).epsilon(0.01));

  CHECK(run_cli("render --world /nonexistent.json --out x.pgm").exit_code == 2);
}

TEST_CASE("gradcheck: corrupted gradients exit 1 and the report names tensors") {
  const RunResult r = run_cli("gradcheck --seed 2 --corrupt");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("conv1/kernel") != std::string::npos);
  CHECK(r.out.find("fc2/bias") != std::string::npos);
  CHECK(r.out.find("FAIL") != std::string::npos);
}

int main(int argc, char** argv) {
  doctest::Context context;
  int arg_end = argc;
  if (argc > 1 && argv[argc - 1][0] != '-') {
    g_cli = argv[argc - 1];
    arg_end = argc - 1;
  }
  if (g_cli.empty()) {
    std::fprintf(stderr, "usage: test_cli [doctest options] <path-to-dqnav-cli>\n");
    return 1;
  }
  context.applyCommandLine(arg_end, argv);
  return context.run();
}
