#ifndef CHLAB_PEAKON_HPP
#define CHLAB_PEAKON_HPP

#include <vector>

#include "noise.hpp"
#include "rng.hpp"

namespace chlab {

// Canonical peakon variables on the real line (no periodicity here).
struct PeakonState {
  std::vector<double> q;
  std::vector<double> p;

  int count() const { return static_cast<int>(q.size()); }
  void validate() const;  // M >= 1, finite, sizes match
};

// u(x) = (1/2) sum_b p_b e^{-|x - q_b|}
double velocity_at(const PeakonState& s, double x);

// h(q, p) = (1/4) sum_ab p_a p_b e^{-|q_a - q_b|}
double peakon_hamiltonian(const PeakonState& s);

struct PeakonDrift {
  std::vector<double> dq;
  std::vector<double> dp;
};

// dq_a = u(q_a), dp_a = -p_a du/dx|_{q_a}, with sgn(0) = 0 so the
// self-interaction force vanishes.
PeakonDrift peakon_drift(const PeakonState& s);

PeakonState step_deterministic(const PeakonState& s, double dt);  // RK4
// Stratonovich-Heun: dq_a += sum_i xi_i(q_a) o dW_i, dp_a += -p_a sum_i xi_i'(q_a) o dW_i
PeakonState step_stochastic(const PeakonState& s, double dt,
                            const std::vector<double>& dW, const NoiseBasis& noise);

struct PeakonTrajectory {
  std::vector<double> times;
  std::vector<PeakonState> states;
  std::vector<double> hamiltonian;
  std::vector<double> total_momentum;
  std::vector<std::vector<double>> increments;
};

struct PeakonEvolveOptions {
  double dt = 1e-3;
  double T = 1.0;
  int output_stride = 1;
};

PeakonTrajectory simulate_peakons(const PeakonState& s0, const NoiseBasis& noise,
                                  const PeakonEvolveOptions& opts, const CounterRng& rng);

}  // namespace chlab

#endif
