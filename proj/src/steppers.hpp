#ifndef CHLAB_STEPPERS_HPP
#define CHLAB_STEPPERS_HPP

#include <cstddef>
#include <vector>

namespace chlab {

// Shared time steppers over flat state vectors. The PDE, the peakon system
// and the scalar slope SDEs all step through these, so the scheme tested by
// the scalar reduction tests is the scheme used everywhere.
using StateVec = std::vector<double>;

// Classical 4-stage explicit Runge-Kutta.
template <class Drift>
StateVec rk4_step(const StateVec& y, double dt, Drift&& drift) {
  const size_t n = y.size();
  StateVec k1 = drift(y);
  StateVec tmp(n);
  for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  StateVec k2 = drift(tmp);
  for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  StateVec k3 = drift(tmp);
  for (size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
  StateVec k4 = drift(tmp);
  StateVec out(n);
  for (size_t i = 0; i < n; ++i)
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// Heun (midpoint-predictor) step, Stratonovich-consistent. `noise(y)` returns
// the full stochastic increment sum_i G_i(y) dW_i for the step's increments.
template <class Drift, class Noise>
StateVec heun_step(const StateVec& y, double dt, Drift&& drift, Noise&& noise) {
  const size_t n = y.size();
  StateVec f0 = drift(y);
  StateVec g0 = noise(y);
  StateVec pred(n);
  for (size_t i = 0; i < n; ++i) pred[i] = y[i] + dt * f0[i] + g0[i];
  StateVec f1 = drift(pred);
  StateVec g1 = noise(pred);
  StateVec out(n);
  for (size_t i = 0; i < n; ++i)
    out[i] = y[i] + 0.5 * dt * (f0[i] + f1[i]) + 0.5 * (g0[i] + g1[i]);
  return out;
}

}  // namespace chlab

#endif
