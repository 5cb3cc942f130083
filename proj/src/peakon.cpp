#include "peakon.hpp"

#include <cmath>

#include "errors.hpp"
#include "steppers.hpp"

namespace chlab {

namespace {
inline double sgn0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

StateVec pack(const PeakonState& s) {
  StateVec y(s.q.size() * 2);
  for (size_t a = 0; a < s.q.size(); ++a) {
    y[a] = s.q[a];
    y[s.q.size() + a] = s.p[a];
  }
  return y;
}

PeakonState unpack(const StateVec& y) {
  PeakonState s;
  const size_t m = y.size() / 2;
  s.q.assign(y.begin(), y.begin() + static_cast<long>(m));
  s.p.assign(y.begin() + static_cast<long>(m), y.end());
  return s;
}

StateVec drift_vec(const StateVec& y) {
  PeakonState s = unpack(y);
  PeakonDrift d = peakon_drift(s);
  StateVec out(y.size());
  const size_t m = s.q.size();
  for (size_t a = 0; a < m; ++a) {
    out[a] = d.dq[a];
    out[m + a] = d.dp[a];
  }
  return out;
}
}  // namespace

void PeakonState::validate() const {
  require(!q.empty(), ErrorKind::InvalidArgument, "peakon state: M must be >= 1");
  require(q.size() == p.size(), ErrorKind::InvalidArgument,
          "peakon state: position/momentum size mismatch");
  for (size_t a = 0; a < q.size(); ++a)
    require(std::isfinite(q[a]) && std::isfinite(p[a]), ErrorKind::InvalidArgument,
            "peakon state: non-finite entry");
}

double velocity_at(const PeakonState& s, double x) {
  double u = 0.0;
  for (size_t b = 0; b < s.q.size(); ++b)
    u += 0.5 * s.p[b] * std::exp(-std::fabs(x - s.q[b]));
  return u;
}

double peakon_hamiltonian(const PeakonState& s) {
  double h = 0.0;
  for (size_t a = 0; a < s.q.size(); ++a)
    for (size_t b = 0; b < s.q.size(); ++b)
      h += s.p[a] * s.p[b] * std::exp(-std::fabs(s.q[a] - s.q[b]));
  return 0.25 * h;
}

PeakonDrift peakon_drift(const PeakonState& s) {
  s.validate();
  const size_t m = s.q.size();
  PeakonDrift d;
  d.dq.assign(m, 0.0);
  d.dp.assign(m, 0.0);
  for (size_t a = 0; a < m; ++a) {
    double u = 0.0, grad = 0.0;
    for (size_t b = 0; b < m; ++b) {
      const double e = std::exp(-std::fabs(s.q[a] - s.q[b]));
      u += 0.5 * s.p[b] * e;
      grad += 0.5 * s.p[b] * sgn0(s.q[a] - s.q[b]) * e;  // -du/dx at q_a
    }
    d.dq[a] = u;
    d.dp[a] = s.p[a] * grad;
  }
  return d;
}

PeakonState step_deterministic(const PeakonState& s, double dt) {
  require(dt > 0.0, ErrorKind::InvalidArgument, "peakon step: dt must be positive");
  PeakonState out = unpack(rk4_step(pack(s), dt, drift_vec));
  out.validate();
  return out;
}

PeakonState step_stochastic(const PeakonState& s, double dt,
                            const std::vector<double>& dW, const NoiseBasis& noise) {
  require(dt > 0.0, ErrorKind::InvalidArgument, "peakon step: dt must be positive");
  require(dW.size() == static_cast<size_t>(noise.size()), ErrorKind::InvalidArgument,
          "peakon step: one increment per mode required");
  const size_t m = s.q.size();
  auto diffusion = [&](const StateVec& y) {
    PeakonState st = unpack(y);
    StateVec g(y.size(), 0.0);
    for (size_t i = 0; i < dW.size(); ++i) {
      const NoiseMode& mode = noise.modes[i];
      for (size_t a = 0; a < m; ++a) {
        g[a] += mode.eval(st.q[a]) * dW[i];
        g[m + a] += -st.p[a] * mode.eval_dx(st.q[a]) * dW[i];
      }
    }
    return g;
  };
  PeakonState out = unpack(heun_step(pack(s), dt, drift_vec, diffusion));
  out.validate();
  return out;
}

PeakonTrajectory simulate_peakons(const PeakonState& s0, const NoiseBasis& noise,
                                  const PeakonEvolveOptions& opts,
                                  const CounterRng& rng) {
  s0.validate();
  require(opts.dt > 0.0, ErrorKind::Validation, "time.dt: must be positive");
  require(opts.T > 0.0, ErrorKind::Validation, "time.T: must be positive");
  require(opts.output_stride >= 1, ErrorKind::Validation,
          "time.output_stride: must be >= 1");

  const uint64_t steps = static_cast<uint64_t>(std::llround(opts.T / opts.dt));
  PeakonTrajectory traj;
  auto record = [&](double t, const PeakonState& s) {
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.hamiltonian.push_back(peakon_hamiltonian(s));
    double mom = 0.0;
    for (double p : s.p) mom += p;
    traj.total_momentum.push_back(mom);
  };
  record(0.0, s0);

  PeakonState s = s0;
  const double sqrt_dt = std::sqrt(opts.dt);
  std::vector<double> dW(static_cast<size_t>(noise.size()));
  for (uint64_t k = 0; k < steps; ++k) {
    if (noise.empty()) {
      s = step_deterministic(s, opts.dt);
    } else {
      for (int i = 0; i < noise.size(); ++i)
        dW[static_cast<size_t>(i)] = rng.normal(k, static_cast<uint32_t>(i)) * sqrt_dt;
      traj.increments.push_back(dW);
      s = step_stochastic(s, opts.dt, dW, noise);
    }
    if ((k + 1) % static_cast<uint64_t>(opts.output_stride) == 0 || k + 1 == steps)
      record(static_cast<double>(k + 1) * opts.dt, s);
  }
  return traj;
}

}  // namespace chlab
