#include "ch_pde.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "errors.hpp"
#include "functionals.hpp"
#include "spectral.hpp"
#include "steepening.hpp"
#include "steppers.hpp"

namespace chlab {

namespace {

Field field_from(const Grid& g, StateVec v) {
  Field f(g);
  f.values = std::move(v);
  return f;
}

struct FineFields {
  Field u;
  Field ux;
  Spectrum c;  // coarse spectrum of u
};

FineFields to_fine(const Field& u) {
  FineFields out;
  out.c = analyze(u);
  Spectrum cx = out.c;
  apply_derivative(cx, u.grid);
  out.u = synthesize_fine(u.grid, pad2(out.c, u.grid));
  out.ux = synthesize_fine(u.grid, pad2(cx, u.grid));
  return out;
}

}  // namespace

RhsData advective_rhs_full(const Field& u) {
  const Grid& g = u.grid;
  FineFields f = to_fine(u);
  const int m = 2 * g.n;
  std::vector<double> conv(static_cast<size_t>(m)), w(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    conv[static_cast<size_t>(j)] = f.u[j] * f.ux[j];
    w[static_cast<size_t>(j)] = f.u[j] * f.u[j] + 0.5 * f.ux[j] * f.ux[j];
  }
  Spectrum c_conv = truncate2(analyze_fine(g, conv), g);
  Spectrum c_w = truncate2(analyze_fine(g, w), g);
  apply_helmholtz_inverse(c_w, g);

  RhsData out;
  out.kconv = synthesize(g, c_w);
  apply_derivative(c_w, g);
  Spectrum c_rhs(c_conv.size());
  for (size_t j = 0; j < c_rhs.size(); ++j) c_rhs[j] = -c_conv[j] - c_w[j];
  out.rhs = synthesize(g, c_rhs);
  {
    Spectrum cx = f.c;
    apply_derivative(cx, g);
    out.ux = synthesize(g, cx);
  }
  return out;
}

Field advective_rhs(const Field& u) {
  check_finite(u, "advective_rhs input");
  const Grid& g = u.grid;
  FineFields f = to_fine(u);
  const int m = 2 * g.n;
  std::vector<double> conv(static_cast<size_t>(m)), w(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    conv[static_cast<size_t>(j)] = f.u[j] * f.ux[j];
    w[static_cast<size_t>(j)] = f.u[j] * f.u[j] + 0.5 * f.ux[j] * f.ux[j];
  }
  Spectrum c_conv = truncate2(analyze_fine(g, conv), g);
  Spectrum c_w = truncate2(analyze_fine(g, w), g);
  const double L = g.length;
  for (int j = 0; j <= g.n / 2; ++j) {
    double k = 2.0 * M_PI * j / L;
    std::complex<double> ik(0.0, j < g.n / 2 ? k : 0.0);
    c_conv[static_cast<size_t>(j)] =
        -c_conv[static_cast<size_t>(j)] - ik / (1.0 + k * k) * c_w[static_cast<size_t>(j)];
  }
  return synthesize(g, c_conv);
}

Field noise_operator_A(const Field& u, const NoiseMode& mode) {
  check_finite(u, "noise_operator_A input");
  const Grid& g = u.grid;
  if (mode.kind == NoiseMode::Kind::Constant) {
    Field out = spectral_derivative(u);
    for (auto& v : out.values) v *= mode.c;
    return out;
  }
  FineFields f = to_fine(u);
  Field xi = synthesize_fine(g, pad2(analyze(mode.xi_field(g)), g));
  Field xix = synthesize_fine(g, pad2(analyze(mode.xi_x(g)), g));
  Field xixx = synthesize_fine(g, pad2(analyze(mode.xi_xx(g)), g));
  const int m = 2 * g.n;
  std::vector<double> q1(static_cast<size_t>(m)), q2(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    q1[static_cast<size_t>(j)] = f.ux[j] * xi[j];
    q2[static_cast<size_t>(j)] = f.ux[j] * xixx[j] + 2.0 * f.u[j] * xix[j];
  }
  Spectrum c1 = truncate2(analyze_fine(g, q1), g);
  Spectrum c2 = truncate2(analyze_fine(g, q2), g);
  apply_helmholtz_inverse(c2, g);
  for (size_t j = 0; j < c1.size(); ++j) c1[j] -= c2[j];
  return synthesize(g, c1);
}

Field noise_operator_B(const Field& u, const NoiseMode& mode) {
  check_finite(u, "noise_operator_B input");
  const Grid& g = u.grid;
  if (mode.kind == NoiseMode::Kind::Constant) return Field(g);  // exactly zero
  FineFields f = to_fine(u);
  Field xix = synthesize_fine(g, pad2(analyze(mode.xi_x(g)), g));
  Field xixx = synthesize_fine(g, pad2(analyze(mode.xi_xx(g)), g));
  Field xixxx = synthesize_fine(g, pad2(analyze(mode.xi_xxx(g)), g));
  const int m = 2 * g.n;
  std::vector<double> r1(static_cast<size_t>(m)), r2(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    r1[static_cast<size_t>(j)] = f.u[j] * xixx[j];
    r2[static_cast<size_t>(j)] = f.u[j] * xixxx[j] + 2.0 * f.u[j] * xix[j];
  }
  Spectrum c1 = truncate2(analyze_fine(g, r1), g);
  Spectrum c2 = truncate2(analyze_fine(g, r2), g);
  Spectrum cb(c1.size());
  const double L = g.length;
  for (int j = 0; j <= g.n / 2; ++j) {
    double k = 2.0 * M_PI * j / L;
    std::complex<double> ik(0.0, j < g.n / 2 ? k : 0.0);
    double H = 1.0 + k * k;
    cb[static_cast<size_t>(j)] = -c1[static_cast<size_t>(j)] +
                                 c1[static_cast<size_t>(j)] / H -
                                 ik / H * c2[static_cast<size_t>(j)];
  }
  return synthesize(g, cb);
}

double cfl_max_dt(const Field& u, double cfl) {
  return cfl * u.grid.dx() / std::max(1.0, sup_norm(u));
}

namespace {
void enforce_cfl(const Field& u, double dt) {
  double lim = cfl_max_dt(u);
  if (dt > lim) {
    std::ostringstream os;
    os << "time step violates the advective stability bound: dt=" << dt
       << " > " << lim << "; use dt <= " << lim;
    throw Error(ErrorKind::CflViolation, os.str());
  }
}
}  // namespace

Field step_deterministic(const Field& u, double dt) {
  require(dt > 0.0, ErrorKind::InvalidArgument, "step: dt must be positive");
  enforce_cfl(u, dt);
  const Grid g = u.grid;
  auto drift = [&g](const StateVec& v) {
    Field f(g);
    f.values = v;
    return advective_rhs(f).values;
  };
  return field_from(g, rk4_step(u.values, dt, drift));
}

Field step_stochastic(const Field& u, double dt, const std::vector<double>& dW,
                      const NoiseBasis& noise) {
  require(dt > 0.0, ErrorKind::InvalidArgument, "step: dt must be positive");
  require(dW.size() == static_cast<size_t>(noise.size()), ErrorKind::InvalidArgument,
          "step_stochastic: one increment per mode required");
  enforce_cfl(u, dt);
  const Grid g = u.grid;
  auto drift = [&g](const StateVec& v) {
    Field f(g);
    f.values = v;
    return advective_rhs(f).values;
  };
  const bool constant = noise.all_constant();
  auto diffusion = [&](const StateVec& v) {
    Field f(g);
    f.values = v;
    if (constant) {
      double alpha = 0.0;
      for (int i = 0; i < noise.size(); ++i)
        alpha += noise.modes[static_cast<size_t>(i)].c * dW[static_cast<size_t>(i)];
      Field ux = spectral_derivative(f);
      for (auto& x : ux.values) x *= -alpha;
      return ux.values;
    }
    Field acc(g);
    for (int i = 0; i < noise.size(); ++i) {
      Field Ai = noise_operator_A(f, noise.modes[static_cast<size_t>(i)]);
      axpy(acc, -dW[static_cast<size_t>(i)], Ai);
    }
    return acc.values;
  };
  return field_from(g, heun_step(u.values, dt, drift, diffusion));
}

namespace {

DiagnosticsRow diagnostics_of(double t, const Field& u) {
  DiagnosticsRow d;
  d.t = t;
  d.h = hamiltonian_h(u);
  d.norm12 = norm_12(u);
  d.momentum = momentum_total(u);
  d.sup_u = sup_norm(u);
  Field ux = spectral_derivative(u);
  double m = 0.0;
  for (double v : ux.values) m = std::max(m, std::fabs(v));
  d.sup_ux = m;
  return d;
}

using IncrementSource = std::function<double(uint64_t step, uint32_t mode)>;

Trajectory run_loop(const Field& u0, const NoiseBasis& noise, const EvolveOptions& opts,
                    const IncrementSource& draw) {
  check_finite(u0, "simulate initial condition");
  require(opts.dt > 0.0, ErrorKind::Validation, "time.dt: must be positive");
  require(opts.T > 0.0, ErrorKind::Validation, "time.T: must be positive");
  require(opts.output_stride >= 1, ErrorKind::Validation,
          "time.output_stride: must be >= 1");
  require(opts.blowup_threshold > 0.0, ErrorKind::Validation,
          "tracking.blowup_threshold: must be positive");

  const Grid g = u0.grid;
  const bool stochastic = !noise.empty();
  const uint64_t steps = static_cast<uint64_t>(std::llround(opts.T / opts.dt));
  require(steps >= 1, ErrorKind::Validation, "time: T/dt must be at least one step");

  Trajectory traj;
  traj.grid = g;
  traj.dt = opts.dt;
  traj.n_modes = noise.size();

  Field u = u0;
  std::optional<double> hint;

  auto record_output = [&](double t, const Field& f) {
    if (opts.store_snapshots) {
      traj.times.push_back(t);
      traj.snapshots.push_back(f);
    }
    traj.diagnostics.push_back(diagnostics_of(t, f));
  };
  auto track_now = [&](double t, const Field& f) {
    if (!opts.track_slope || traj.tracking_lost) return;
    auto rec = slope_probe(f, t, hint);
    if (!rec) {
      if (!traj.slope.empty()) traj.tracking_lost = true;
      return;
    }
    if (hint) {
      double jump = std::fabs(g.periodic_delta(rec->nu, *hint));
      if (jump > g.length / 10.0) {
        traj.tracking_lost = true;
        return;
      }
    }
    hint = rec->nu;
    traj.slope.push_back(*rec);
  };

  record_output(0.0, u);
  track_now(0.0, u);

  std::vector<double> dW(static_cast<size_t>(noise.size()), 0.0);
  const double sqrt_dt = std::sqrt(opts.dt);
  for (uint64_t k = 0; k < steps; ++k) {
    const double t_next = static_cast<double>(k + 1) * opts.dt;
    Field next(g);
    if (stochastic) {
      for (int i = 0; i < noise.size(); ++i)
        dW[static_cast<size_t>(i)] = draw(k, static_cast<uint32_t>(i)) * sqrt_dt;
      traj.increments.push_back(dW);
      next = step_stochastic(u, opts.dt, dW, noise);
    } else {
      next = step_deterministic(u, opts.dt);
    }

    if (!next.finite()) {
      traj.broken = true;
      traj.break_time = t_next;
      traj.break_reason = "non-finite field (wave breaking)";
      break;
    }
    u = std::move(next);
    track_now(t_next, u);

    DiagnosticsRow last{};
    bool have_diag = false;
    if ((k + 1) % static_cast<uint64_t>(opts.output_stride) == 0 || k + 1 == steps) {
      record_output(t_next, u);
      last = traj.diagnostics.back();
      have_diag = true;
    }
    double sup_ux = have_diag ? last.sup_ux : -1.0;
    if (!have_diag) {
      Field ux = spectral_derivative(u);
      sup_ux = 0.0;
      for (double v : ux.values) sup_ux = std::max(sup_ux, std::fabs(v));
    }
    if (sup_ux > opts.blowup_threshold) {
      traj.broken = true;
      traj.break_time = t_next;
      traj.break_reason = "slope threshold exceeded";
      if (!have_diag) record_output(t_next, u);
      break;
    }
  }
  if (traj.snapshots.empty()) record_output(0.0, u0);
  return traj;
}

}  // namespace

Trajectory simulate(const Field& u0, const NoiseBasis& noise,
                    const EvolveOptions& opts, const CounterRng& rng) {
  return run_loop(u0, noise, opts,
                  [&rng](uint64_t step, uint32_t mode) { return rng.normal(step, mode); });
}

Trajectory replay(const Field& u0, const NoiseBasis& noise, const EvolveOptions& opts,
                  const std::vector<std::vector<double>>& increments) {
  const uint64_t steps = static_cast<uint64_t>(std::llround(opts.T / opts.dt));
  require(increments.size() >= steps || noise.empty(), ErrorKind::InvalidArgument,
          "replay: increment table shorter than the requested run");
  const double sqrt_dt = std::sqrt(opts.dt);
  return run_loop(u0, noise, opts, [&](uint64_t step, uint32_t mode) {
    return increments[step][mode] / sqrt_dt;  // run_loop rescales by sqrt(dt)
  });
}

}  // namespace chlab
