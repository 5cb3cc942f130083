#ifndef CHLAB_RUNNER_HPP
#define CHLAB_RUNNER_HPP

#include <string>

#include <json.hpp>

#include "config.hpp"

namespace chlab {

struct RunResult {
  std::string out_dir;
  nlohmann::json manifest;
  std::string fingerprint;  // over the manifest minus volatile fields
};

// Each run writes CSV/JSON outputs plus schema.json into out_dir and finishes
// with manifest.json (config echo, seed, per-file fingerprints, wall time).
// A directory without manifest.json is an incomplete bundle.
RunResult run_ch(const ExperimentConfig& cfg, const std::string& out_dir);
RunResult run_sch(const ExperimentConfig& cfg, const std::string& out_dir);
RunResult run_peakons(const ExperimentConfig& cfg, const std::string& out_dir);
RunResult run_slope_mc(const ExperimentConfig& cfg, const std::string& out_dir);
RunResult run_spectrum(const ExperimentConfig& cfg, const std::string& out_dir);

RunResult run_verb(const ExperimentConfig& cfg, const std::string& verb,
                   const std::string& out_dir);

}  // namespace chlab

#endif
