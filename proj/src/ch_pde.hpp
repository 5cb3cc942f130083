#ifndef CHLAB_CH_PDE_HPP
#define CHLAB_CH_PDE_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "grid.hpp"
#include "noise.hpp"
#include "rng.hpp"
#include "slope_record.hpp"

namespace chlab {

// Advective-form right-hand side -u u_x - dx K*(u^2 + u_x^2/2), with the
// quadratic products dealiased by 2x zero padding.
Field advective_rhs(const Field& u);

struct RhsData {
  Field rhs;
  Field ux;
  Field kconv;  // K*(u^2 + u_x^2/2), wanted by the slope tracker
};
RhsData advective_rhs_full(const Field& u);

// A^i(u) = u_x xi - K*(u_x xi_xx + 2 u xi_x); exactly c u_x for constant xi.
Field noise_operator_A(const Field& u, const NoiseMode& mode);
// B^i(u) = -u xi_xx + K*(u xi_xx) - dx K*(u xi_xxx + 2 u xi_x); zero for constant xi.
Field noise_operator_B(const Field& u, const NoiseMode& mode);

// Advective stability bound dt <= cfl * dx / max(1, sup|u|).
double cfl_max_dt(const Field& u, double cfl = 0.5);

// One RK4 step; throws CflViolation (message carries a suggested dt) when the
// bound is violated. NaN in the result is the caller's blow-up signal.
Field step_deterministic(const Field& u, double dt);

// One Stratonovich-Heun step; dW holds one N(0, dt) increment per mode.
Field step_stochastic(const Field& u, double dt, const std::vector<double>& dW,
                      const NoiseBasis& noise);

struct DiagnosticsRow {
  double t;
  double h;
  double norm12;
  double momentum;
  double sup_u;
  double sup_ux;
};

struct EvolveOptions {
  double dt = 1e-3;
  double T = 1.0;
  int output_stride = 1;             // snapshot/diagnostic cadence in steps
  double blowup_threshold = 1e3;     // sup|u_x| above this ends the run as broken
  bool track_slope = false;          // record SlopeRecord every step
  bool store_snapshots = true;
};

struct Trajectory {
  Grid grid;
  double dt = 0.0;
  int n_modes = 0;
  std::vector<double> times;             // snapshot times
  std::vector<Field> snapshots;
  std::vector<DiagnosticsRow> diagnostics;
  std::vector<std::vector<double>> increments;  // [step][mode], exactly as used
  std::vector<SlopeRecord> slope;        // per-step when track_slope
  bool broken = false;
  double break_time = std::numeric_limits<double>::quiet_NaN();
  std::string break_reason;
  bool tracking_lost = false;

  const Field& final_snapshot() const { return snapshots.back(); }
};

// Deterministic when the basis is empty (RK4); Stratonovich-Heun otherwise.
// Brownian increments come from the per-path counter stream and are recorded
// for bit-exact replay.
Trajectory simulate(const Field& u0, const NoiseBasis& noise,
                    const EvolveOptions& opts, const CounterRng& rng);

// Re-run under externally supplied increments (replay / refinement studies).
Trajectory replay(const Field& u0, const NoiseBasis& noise,
                  const EvolveOptions& opts,
                  const std::vector<std::vector<double>>& increments);

}  // namespace chlab

#endif
