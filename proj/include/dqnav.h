/* dqnav: quadcopter navigation-assistance trainer.
 *
 * C interface to the training, evaluation, rendering and gradient-check
 * entry points. Handles are opaque; every function returns a status code
 * and the last failure message is retrievable per thread via
 * dqnav_last_error().
 */
#ifndef DQNAV_H
#define DQNAV_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dqnav_status {
  DQNAV_OK = 0,
  DQNAV_ERR_INVALID_ARGUMENT = 1, /* bad values in config/arguments */
  DQNAV_ERR_IO = 2,               /* file open/read/write failure */
  DQNAV_ERR_FORMAT = 3,           /* corrupt config, world or checkpoint */
  DQNAV_ERR_SHAPE = 4,            /* tensor/layer shape mismatch */
  DQNAV_ERR_STATE = 5,            /* call out of order */
  DQNAV_ERR_DIVERGED = 6,         /* non-finite loss during training */
  DQNAV_ERR_VERIFICATION = 7,     /* gradient check exceeded tolerance */
  DQNAV_ERR_INTERNAL = 8
} dqnav_status;

/* Version string, e.g. "dqnav-0.1.0". */
const char* dqnav_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* dqnav_last_error(void);

typedef struct dqnav_config dqnav_config;
typedef struct dqnav_world dqnav_world;

/* Configuration. Defaults reproduce the paper protocol; an empty JSON
 * object is a valid config file. */
dqnav_status dqnav_config_create(dqnav_config** out);
dqnav_status dqnav_config_load(const char* path, dqnav_config** out);
dqnav_status dqnav_config_set_seed(dqnav_config* cfg, uint64_t seed);
uint64_t dqnav_config_seed(const dqnav_config* cfg);
void dqnav_config_free(dqnav_config* cfg);

/* Worlds (JSON: ground plane, goal, spawn spec, boxes). */
dqnav_status dqnav_world_load(const char* path, dqnav_world** out);
void dqnav_world_free(dqnav_world* world);

typedef struct dqnav_metrics {
  uint64_t flights_trained;
  uint64_t test_flights;
  double collision_pct;
  double avg_reward_per_step;
  double reward_stderr;
} dqnav_metrics;

typedef void (*dqnav_phase_fn)(uint64_t phase, const dqnav_metrics* metrics,
                               void* user);

/* Runs the full training protocol. Writes ckpt_f{N}.dqnav checkpoints,
 * metrics.csv and manifest.json under out_dir; invokes cb (may be NULL)
 * after each test phase. world_path is recorded in the manifest. */
dqnav_status dqnav_train_run(const dqnav_config* cfg, const dqnav_world* world,
                             const char* world_path, const char* out_dir,
                             dqnav_phase_fn cb, void* user);

/* Greedy evaluation of a checkpoint over n flights. */
dqnav_status dqnav_eval_checkpoint(const dqnav_config* cfg, const char* ckpt_path,
                                   const dqnav_world* world, uint64_t flights,
                                   uint64_t seed, dqnav_metrics* out);

/* Uniform-random-action baseline over n flights. */
dqnav_status dqnav_eval_random(const dqnav_config* cfg, const dqnav_world* world,
                               uint64_t flights, uint64_t seed, dqnav_metrics* out);

/* Renders one depth frame from the given pose into a 16-bit binary PGM
 * (depth in centimeters). cfg may be NULL for the default camera. */
dqnav_status dqnav_render_depth(const dqnav_config* cfg, const dqnav_world* world,
                                double x, double y, double z, double yaw_deg,
                                const char* pgm_path);

typedef void (*dqnav_gradcheck_fn)(const char* tensor_name, double max_rel_err,
                                   uint64_t probes, uint64_t kink_skipped,
                                   void* user);

/* Finite-difference verification of the backpropagation path. Reports one
 * callback per parameter tensor (cb may be NULL); returns
 * DQNAV_ERR_VERIFICATION when any tensor exceeds the 1e-4 relative
 * tolerance. inject_fault != 0 deliberately corrupts one gradient tensor
 * (test hook). */
dqnav_status dqnav_gradcheck(uint64_t seed, int inject_fault, dqnav_gradcheck_fn cb,
                             void* user, double* max_rel_err_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DQNAV_H */
