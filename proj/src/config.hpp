#ifndef CHLAB_CONFIG_HPP
#define CHLAB_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "grid.hpp"
#include "noise.hpp"
#include "peakon.hpp"

namespace chlab {

struct DomainConfig {
  double length = 40.0;
  int n = 1024;
};

struct TimeConfig {
  double dt = 1e-3;
  double T = 10.0;
  int output_stride = 100;
};

struct GaussianIc {
  double amplitude = 1.0;
  double center = 20.0;
  double width = 1.0;
  // "velocity": u0 is the Gaussian; "momentum": u0 = K * gaussian (m0 > 0)
  std::string interpret = "velocity";
};

struct PeakonListIc {
  std::vector<double> p;
  std::vector<double> q;
};

struct AntisymmetricIc {
  double amplitude = 1.0;
  double width = 1.0;  // u = -A (y/w) exp(-y^2 / 2w^2), y centered at L/2
};

struct SampledFileIc {
  std::string path;
};

using InitialCondition =
    std::variant<GaussianIc, PeakonListIc, AntisymmetricIc, SampledFileIc>;

struct NoiseModeConfig {
  std::string type = "constant";  // constant | exponential | sampled_file
  double c = 0.0;
  double C = 0.0, A = 0.0, B = 0.0;
  std::string path;
};

struct NoiseConfig {
  bool enabled = false;
  std::vector<NoiseModeConfig> modes;
};

struct TrackingConfig {
  bool enabled = false;
  double blowup_threshold = 1e3;
  double slope_threshold = -50.0;
  std::optional<double> envelope_m;  // default: steepening_constant(u0)
};

struct McConfig {
  int n_paths = 1000;
  double eps = 0.1;
  double s0 = -5.0;
  double M = 1.0;
  std::optional<double> xi_norm;        // default: ||xi|| of constant modes
  std::string process = "envelope";     // envelope | comparison
};

struct SpectrumVerbConfig {
  int k_max = 5;
  int n_peaks = 2;
  bool drift = true;
};

struct ExperimentConfig {
  DomainConfig domain;
  TimeConfig time;
  InitialCondition initial_condition = GaussianIc{};
  NoiseConfig noise;
  TrackingConfig tracking;
  McConfig mc;
  SpectrumVerbConfig spectrum;
  uint64_t seed = 0;
  int paths = 1;  // SCH ensemble size

  // Parses and validates; every failing field is reported at once.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
  nlohmann::json to_json() const;  // full echo, defaults materialized

  Grid make_grid() const;
  Field build_initial_field() const;
  // Peakon runs need the raw list; throws unless the IC is a peakon list.
  PeakonState build_peakon_state() const;
  // Periodic-evolution basis; exponential modes are rejected here (they are
  // admitted for peakon runs and operator diagnostics only).
  NoiseBasis build_noise_basis(const Grid& g) const;
  // Line-geometry basis for peakon runs (constant/exponential/sampled).
  NoiseBasis build_line_noise_basis() const;
  double slope_xi_norm() const;  // mc.xi_norm override or constant-mode norm
};

}  // namespace chlab

#endif
