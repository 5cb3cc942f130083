#include "chlab/chlab.h"

#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "runner.hpp"
#include "slope_sde.hpp"
#include "steepening.hpp"
#include "version.hpp"

using chlab::Error;
using chlab::ErrorKind;

struct chlab_config {
  chlab::ExperimentConfig cfg;
};

struct chlab_run {
  chlab::RunResult result;
  std::string manifest_text;
};

namespace {

thread_local std::string t_last_error = "";

chlab_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return CHLAB_ERR_INVALID_ARGUMENT;
    case ErrorKind::Validation: return CHLAB_ERR_VALIDATION;
    case ErrorKind::Precondition: return CHLAB_ERR_PRECONDITION;
    case ErrorKind::CflViolation: return CHLAB_ERR_CFL;
    case ErrorKind::Numerical: return CHLAB_ERR_NUMERICAL;
    case ErrorKind::NoSpectrum: return CHLAB_ERR_NO_SPECTRUM;
    case ErrorKind::TrackingLost: return CHLAB_ERR_TRACKING_LOST;
    case ErrorKind::Io: return CHLAB_ERR_IO;
  }
  return CHLAB_ERR_INTERNAL;
}

template <class Fn>
chlab_status guarded(Fn&& fn) {
  try {
    fn();
    return CHLAB_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return CHLAB_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return CHLAB_ERR_INTERNAL;
  }
}

chlab_status check_ptr(const void* p, const char* what) {
  if (p) return CHLAB_OK;
  t_last_error = std::string(what) + " must not be NULL";
  return CHLAB_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* chlab_version(void) { return chlab::kVersion; }

const char* chlab_status_name(chlab_status status) {
  switch (status) {
    case CHLAB_OK: return "ok";
    case CHLAB_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case CHLAB_ERR_VALIDATION: return "validation";
    case CHLAB_ERR_PRECONDITION: return "precondition";
    case CHLAB_ERR_CFL: return "cfl-violation";
    case CHLAB_ERR_NUMERICAL: return "numerical";
    case CHLAB_ERR_NO_SPECTRUM: return "no-spectrum";
    case CHLAB_ERR_TRACKING_LOST: return "tracking-lost";
    case CHLAB_ERR_IO: return "io";
    case CHLAB_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* chlab_last_error(void) { return t_last_error.c_str(); }

chlab_status chlab_config_from_json(const char* json_text, chlab_config** out) {
  if (auto s = check_ptr(json_text, "json_text")) return s;
  if (auto s = check_ptr(out, "out")) return s;
  return guarded([&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Validation, std::string("config parse error: ") + e.what());
    }
    *out = new chlab_config{chlab::ExperimentConfig::from_json(j)};
  });
}

chlab_status chlab_config_from_file(const char* path, chlab_config** out) {
  if (auto s = check_ptr(path, "path")) return s;
  if (auto s = check_ptr(out, "out")) return s;
  return guarded([&] { *out = new chlab_config{chlab::ExperimentConfig::from_file(path)}; });
}

chlab_status chlab_config_set_seed(chlab_config* cfg, uint64_t seed) {
  if (auto s = check_ptr(cfg, "cfg")) return s;
  cfg->cfg.seed = seed;
  return CHLAB_OK;
}

chlab_status chlab_config_set_paths(chlab_config* cfg, int n_paths) {
  if (auto s = check_ptr(cfg, "cfg")) return s;
  if (n_paths < 1) {
    t_last_error = "n_paths must be >= 1";
    return CHLAB_ERR_INVALID_ARGUMENT;
  }
  cfg->cfg.paths = n_paths;
  cfg->cfg.mc.n_paths = n_paths;
  return CHLAB_OK;
}

void chlab_config_free(chlab_config* cfg) { delete cfg; }

chlab_status chlab_run_execute(const chlab_config* cfg, const char* verb,
                               const char* out_dir, chlab_run** out) {
  if (auto s = check_ptr(cfg, "cfg")) return s;
  if (auto s = check_ptr(verb, "verb")) return s;
  if (auto s = check_ptr(out_dir, "out_dir")) return s;
  if (auto s = check_ptr(out, "out")) return s;
  return guarded([&] {
    chlab::RunResult r = chlab::run_verb(cfg->cfg, verb, out_dir);
    auto* run = new chlab_run;
    run->result = r;
    run->manifest_text = r.manifest.dump(2);
    *out = run;
  });
}

const char* chlab_run_manifest_json(const chlab_run* run) {
  return run ? run->manifest_text.c_str() : "";
}

const char* chlab_run_fingerprint(const chlab_run* run) {
  return run ? run->result.fingerprint.c_str() : "";
}

void chlab_run_free(chlab_run* run) { delete run; }

chlab_status chlab_coth_envelope(double s0, double M, double t, double* out) {
  if (auto s = check_ptr(out, "out")) return s;
  return guarded([&] { *out = chlab::coth_envelope(s0, M, t); });
}

chlab_status chlab_breaking_time_bound(double s0, double M, double* out) {
  if (auto s = check_ptr(out, "out")) return s;
  return guarded([&] { *out = chlab::breaking_time_bound(s0, M); });
}

chlab_status chlab_bm_drift_max_prob(double mu, double sigma, double a, double* out) {
  if (auto s = check_ptr(out, "out")) return s;
  return guarded([&] { *out = chlab::bm_drift_max_prob(mu, sigma, a); });
}

}  // extern "C"
