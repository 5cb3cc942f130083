/* chlab — Camassa-Holm / stochastic Camassa-Holm numerical laboratory.
 *
 * C API of the shared library. Handles are opaque; every function returns a
 * status code (CHLAB_OK on success) and the last failure message is available
 * per thread via chlab_last_error().
 */
#ifndef CHLAB_CHLAB_H
#define CHLAB_CHLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum chlab_status {
  CHLAB_OK = 0,
  CHLAB_ERR_INVALID_ARGUMENT = 1,
  CHLAB_ERR_VALIDATION = 2,  /* config errors; message lists every failing field */
  CHLAB_ERR_PRECONDITION = 3,
  CHLAB_ERR_CFL = 4,         /* time step violates the advective bound */
  CHLAB_ERR_NUMERICAL = 5,
  CHLAB_ERR_NO_SPECTRUM = 6,
  CHLAB_ERR_TRACKING_LOST = 7,
  CHLAB_ERR_IO = 8,
  CHLAB_ERR_INTERNAL = 9
} chlab_status;

const char* chlab_version(void);
const char* chlab_status_name(chlab_status status);

/* Message for the most recent failure on this thread; valid until the next
 * failing call. Never NULL. */
const char* chlab_last_error(void);

/* ---- experiment configuration ------------------------------------------ */

typedef struct chlab_config chlab_config;

/* Parse a JSON experiment config. On validation failure the error message
 * lists every failing field. */
chlab_status chlab_config_from_json(const char* json_text, chlab_config** out);
chlab_status chlab_config_from_file(const char* path, chlab_config** out);

chlab_status chlab_config_set_seed(chlab_config* cfg, uint64_t seed);
/* Overrides both the SCH ensemble size and mc.n_paths. */
chlab_status chlab_config_set_paths(chlab_config* cfg, int n_paths);

void chlab_config_free(chlab_config* cfg);

/* ---- runs ---------------------------------------------------------------- */

typedef struct chlab_run chlab_run;

/* Execute one verb: "simulate-ch" | "simulate-sch" | "peakons" | "slope-mc" |
 * "spectrum". Writes the output bundle (CSV/JSON + schema.json + manifest.json)
 * into out_dir. */
chlab_status chlab_run_execute(const chlab_config* cfg, const char* verb,
                               const char* out_dir, chlab_run** out);

/* Manifest JSON text and the deterministic fingerprint (identical config and
 * seed reproduce it bit for bit). Owned by the run handle. */
const char* chlab_run_manifest_json(const chlab_run* run);
const char* chlab_run_fingerprint(const chlab_run* run);

void chlab_run_free(chlab_run* run);

/* ---- closed forms -------------------------------------------------------- */

/* Steepening-lemma envelope sqrt(2M) coth(sigma + t sqrt(2M)/2); requires
 * s0 < -sqrt(2M). Returns -inf at and past the pole. */
chlab_status chlab_coth_envelope(double s0, double M, double t, double* out);

/* Pole of the envelope: -2 sigma / sqrt(2M) (-2/s0 for M = 0). */
chlab_status chlab_breaking_time_bound(double s0, double M, double* out);

/* P(max_t (sigma B_t + mu t) >= a) = exp(-2 |mu| a / sigma^2), mu < 0. */
chlab_status chlab_bm_drift_max_prob(double mu, double sigma, double a, double* out);

#ifdef __cplusplus
}
#endif

#endif /* CHLAB_CHLAB_H */
