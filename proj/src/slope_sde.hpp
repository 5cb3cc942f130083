#ifndef CHLAB_SLOPE_SDE_HPP
#define CHLAB_SLOPE_SDE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "rng.hpp"

namespace chlab {

struct SlopeSdeParams {
  double s0 = -5.0;       // initial slope, < 0
  double M = 1.0;         // steepening constant
  double xi_norm = 1.0;   // ||xi|| aggregated over constant modes
  double eps = 0.1;       // epsilon of the mean-bound Riccati, in (0, 1/3)
  double dt = 1e-3;
  double T = 10.0;
  double threshold = -50.0;  // breaking level, <= 10*s0

  void validate() const;
};

// One Euler-Maruyama update of the Ito slope equation at the inflection point:
// ds = -(s^2/2 - u^2(nu)) dt - K*(u^2+ux^2/2)(nu) dt + (xi^2/2) s dt - s xi dW.
double ito_slope_step(double s, double u_at_nu, double kconv_at_nu, double xi_norm,
                      double dt, double dW);

struct SlopePath {
  std::vector<double> t;
  std::vector<double> s;
  std::optional<double> breaking_time;  // first s <= threshold
  bool overflowed = false;              // |s| exceeded the integration floor
  double final_value = 0.0;
};

// Record cadence for paths (every step when <= 0).
struct PathOptions {
  int output_stride = 1;
  double floor = -1e8;  // integration stops (and freezes) below this
};

// Single Heun updates, exposed so coupled tests can drive both processes
// with matched increments.
double comparison_sde_step(double s, double M, double xi_norm, double dt, double dW);
double breaking_envelope_step(double s, double M, double xi_norm, double dt, double dW);

// Lower comparison process from the paper's closing remark:
// ds~ = -(s~^2/2 - (xi^2/2) s~ + M) dt + xi s~ o dW (Stratonovich, Heun).
// Dominated by the true slope (s_t >= s~_t); it blows up almost surely.
SlopePath comparison_sde_path(const SlopeSdeParams& p, const CounterRng& rng,
                              const PathOptions& opts = {});

// Upper envelope process from the wave-breaking theorem's proof: the
// Steepening-Lemma Riccati with transport noise,
// ds^ = (-s^2/2 + M) dt + xi s^ o dW (Stratonovich, Heun).
// Dominates the true slope (s_t <= s^_t), so its threshold crossings
// under-count true breakings: the MC fraction is a lower bound on the
// breaking probability, strictly between 0 and 1 for xi > 0.
SlopePath breaking_envelope_sde_path(const SlopeSdeParams& p, const CounterRng& rng,
                                     const PathOptions& opts = {});

// Closed-form bound on E[s_t]: sqrt(b/a) coth(sigma + t sqrt(ab)) with
// a = (1-eps)/2, b = M + xi^2/(2 eps); requires s0 < -sqrt(b/a).
double riccati_mean_bound(const SlopeSdeParams& p, double t);
double riccati_bound_blowup_time(const SlopeSdeParams& p);

// P(max_t (sigma B_t + mu t) >= a) = exp(-2 |mu| a / sigma^2), mu < 0, a >= 0.
double bm_drift_max_prob(double mu, double sigma, double a);

enum class McProcess { Envelope, Comparison };

struct PathOutcome {
  uint64_t path_index;
  bool broken;
  double breaking_time;  // NaN when not broken
};

struct MeanSlopePoint {
  double t;
  double mean;
  double se;
};

struct EnsembleSummary {
  int n_paths = 0;
  int n_broken = 0;
  double p_hat = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 1.0;
  uint64_t master_seed = 0;
  std::vector<PathOutcome> outcomes;
  std::vector<MeanSlopePoint> mean_slope;  // broken paths frozen at their last value
};

// Monte Carlo breaking-probability estimate over independent per-path
// streams; broken = threshold crossed before T.
EnsembleSummary mc_breaking_probability(const SlopeSdeParams& p, int n_paths,
                                        uint64_t master_seed,
                                        McProcess process = McProcess::Envelope);

// Wilson 95% score interval.
void wilson_interval(int successes, int n, double& low, double& high);

}  // namespace chlab

#endif
