#include "dqnav.h"

#include <exception>
#include <filesystem>
#include <fstream>
#include <string>

#include "dqnav/config.hpp"
#include "dqnav/experiment.hpp"
#include "dqnav/gradcheck.hpp"
#include "dqnav/version.hpp"
#include "dqnav/world.hpp"

using namespace dqnav;

struct dqnav_config {
  RunConfig cfg;
};

struct dqnav_world {
  World world;
};

namespace {

thread_local std::string t_last_error = "";

dqnav_status status_of(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::invalid_argument: return DQNAV_ERR_INVALID_ARGUMENT;
    case ErrorKind::shape_mismatch: return DQNAV_ERR_SHAPE;
    case ErrorKind::io: return DQNAV_ERR_IO;
    case ErrorKind::bad_format: return DQNAV_ERR_FORMAT;
    case ErrorKind::bad_state: return DQNAV_ERR_STATE;
    case ErrorKind::diverged: return DQNAV_ERR_DIVERGED;
  }
  return DQNAV_ERR_INTERNAL;
}

template <typename Fn>
dqnav_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    t_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return DQNAV_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return DQNAV_ERR_INTERNAL;
  }
}

dqnav_status invalid(const std::string& message) {
  t_last_error = message;
  return DQNAV_ERR_INVALID_ARGUMENT;
}

dqnav_metrics to_c(const PhaseMetrics& m) {
  return {m.flights_trained, m.test_flights, m.collision_pct, m.avg_reward_per_step,
          m.reward_stderr};
}

}  // namespace

extern "C" {

const char* dqnav_version(void) { return kVersion; }

const char* dqnav_last_error(void) { return t_last_error.c_str(); }

dqnav_status dqnav_config_create(dqnav_config** out) {
  if (!out) return invalid("dqnav_config_create: out is NULL");
  return guarded([&] {
    *out = new dqnav_config{default_config()};
    return DQNAV_OK;
  });
}

dqnav_status dqnav_config_load(const char* path, dqnav_config** out) {
  if (!path || !out) return invalid("dqnav_config_load: NULL argument");
  return guarded([&] {
    *out = new dqnav_config{load_config(path)};
    return DQNAV_OK;
  });
}

dqnav_status dqnav_config_set_seed(dqnav_config* cfg, uint64_t seed) {
  if (!cfg) return invalid("dqnav_config_set_seed: cfg is NULL");
  cfg->cfg.seed = seed;
  return DQNAV_OK;
}

uint64_t dqnav_config_seed(const dqnav_config* cfg) {
  return cfg ? cfg->cfg.seed : 0;
}

void dqnav_config_free(dqnav_config* cfg) { delete cfg; }

dqnav_status dqnav_world_load(const char* path, dqnav_world** out) {
  if (!path || !out) return invalid("dqnav_world_load: NULL argument");
  return guarded([&] {
    *out = new dqnav_world{load_world(path)};
    return DQNAV_OK;
  });
}

void dqnav_world_free(dqnav_world* world) { delete world; }

dqnav_status dqnav_train_run(const dqnav_config* cfg, const dqnav_world* world,
                             const char* world_path, const char* out_dir,
                             dqnav_phase_fn cb, void* user) {
  if (!cfg || !world || !out_dir)
    return invalid("dqnav_train_run: NULL argument");
  return guarded([&] {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
      std::ofstream mf(fs::path(out_dir) / "manifest.json", std::ios::trunc);
      if (!mf) fail(ErrorKind::io, std::string("cannot write manifest under ") + out_dir);
      mf << manifest_json(cfg->cfg, world_path ? world_path : "");
    }

    struct Relay : TrainObserver {
      dqnav_phase_fn cb;
      void* user;
      void on_phase(uint64_t phase, const PhaseMetrics& m) override {
        if (!cb) return;
        const dqnav_metrics c = to_c(m);
        cb(phase, &c, user);
      }
    } relay;
    relay.cb = cb;
    relay.user = user;

    Session session(cfg->cfg, world->world,
                    resolve_test_world(cfg->cfg, world->world));
    session.training_loop(out_dir, &relay);
    return DQNAV_OK;
  });
}

dqnav_status dqnav_eval_checkpoint(const dqnav_config* cfg, const char* ckpt_path,
                                   const dqnav_world* world, uint64_t flights,
                                   uint64_t seed, dqnav_metrics* out) {
  if (!cfg || !ckpt_path || !world || !out)
    return invalid("dqnav_eval_checkpoint: NULL argument");
  return guarded([&] {
    RunConfig rc = cfg->cfg;
    rc.seed = seed;
    Session session(rc, world->world);
    session.agent().load_checkpoint(ckpt_path);
    *out = to_c(session.evaluate(FlightMode::greedy, flights, stream::test_flight, 0));
    return DQNAV_OK;
  });
}

dqnav_status dqnav_eval_random(const dqnav_config* cfg, const dqnav_world* world,
                               uint64_t flights, uint64_t seed, dqnav_metrics* out) {
  if (!cfg || !world || !out) return invalid("dqnav_eval_random: NULL argument");
  return guarded([&] {
    RunConfig rc = cfg->cfg;
    rc.seed = seed;
    Session session(rc, world->world);
    *out = to_c(
        session.evaluate(FlightMode::random, flights, stream::baseline_flight, 0));
    return DQNAV_OK;
  });
}

dqnav_status dqnav_render_depth(const dqnav_config* cfg, const dqnav_world* world,
                                double x, double y, double z, double yaw_deg,
                                const char* pgm_path) {
  if (!world || !pgm_path) return invalid("dqnav_render_depth: NULL argument");
  return guarded([&] {
    const CameraModel cam = cfg ? cfg->cfg.camera : CameraModel{};
    const QuadState pose{{x, y, z}, wrap_angle(yaw_deg)};
    write_depth_pgm(render_depth(world->world, pose, cam), pgm_path);
    return DQNAV_OK;
  });
}

dqnav_status dqnav_gradcheck(uint64_t seed, int inject_fault, dqnav_gradcheck_fn cb,
                             void* user, double* max_rel_err_out) {
  return guarded([&] {
    FdOptions opts;
    opts.inject_fault = inject_fault != 0;
    const FdReport report = gradcheck_canonical(seed, opts);
    for (const TensorCheck& t : report.tensors)
      if (cb) cb(t.name.c_str(), t.max_rel_err, t.probes, t.kink_skipped, user);
    if (max_rel_err_out) *max_rel_err_out = report.max_rel_err;
    if (!report.pass) {
      t_last_error = "gradient check exceeded tolerance: max relative error " +
                     std::to_string(report.max_rel_err);
      return DQNAV_ERR_VERIFICATION;
    }
    return DQNAV_OK;
  });
}

}  // extern "C"
