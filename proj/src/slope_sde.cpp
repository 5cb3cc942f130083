#include "slope_sde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "parallel.hpp"
#include "steppers.hpp"

namespace chlab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void SlopeSdeParams::validate() const {
  ValidationCollector v;
  if (!(s0 < 0.0) || !std::isfinite(s0)) v.fail("mc.s0", "must be negative and finite");
  if (!(M >= 0.0) || !std::isfinite(M)) v.fail("mc.M", "must be >= 0 and finite");
  if (!(xi_norm >= 0.0) || !std::isfinite(xi_norm))
    v.fail("mc.xi_norm", "must be >= 0 and finite");
  if (!(eps > 0.0 && eps < 1.0 / 3.0)) v.fail("mc.eps", "must lie in (0, 1/3)");
  if (!(dt > 0.0)) v.fail("time.dt", "must be positive");
  if (!(T > 0.0)) v.fail("time.T", "must be positive");
  if (!(threshold <= 10.0 * s0))
    v.fail("tracking.slope_threshold", "must be <= 10*s0 (|threshold| >= 10|s0|)");
  v.raise_if_failed();
}

double ito_slope_step(double s, double u_at_nu, double kconv_at_nu, double xi_norm,
                      double dt, double dW) {
  const double drift = -(0.5 * s * s - u_at_nu * u_at_nu) - kconv_at_nu +
                       0.5 * xi_norm * xi_norm * s;
  return s + drift * dt - s * xi_norm * dW;
}

namespace {

template <class DriftFn>
SlopePath run_scalar_path(const SlopeSdeParams& p, const CounterRng& rng,
                          const PathOptions& opts, DriftFn&& drift_fn) {
  p.validate();
  const uint64_t steps = static_cast<uint64_t>(std::llround(p.T / p.dt));
  const double sqrt_dt = std::sqrt(p.dt);
  const int stride = std::max(1, opts.output_stride);

  SlopePath path;
  path.t.push_back(0.0);
  path.s.push_back(p.s0);

  double s = p.s0;
  bool frozen = false;
  for (uint64_t k = 0; k < steps; ++k) {
    const double t_next = static_cast<double>(k + 1) * p.dt;
    if (!frozen) {
      const double dW = rng.normal(k, 0) * sqrt_dt;
      auto drift = [&](const StateVec& y) { return StateVec{drift_fn(y[0])}; };
      auto noise = [&](const StateVec& y) { return StateVec{p.xi_norm * y[0] * dW}; };
      s = heun_step(StateVec{s}, p.dt, drift, noise)[0];
      if (!path.breaking_time && s <= p.threshold) path.breaking_time = t_next;
      if (!std::isfinite(s) || s <= opts.floor || s >= -opts.floor) {
        s = std::clamp(std::isfinite(s) ? s : opts.floor, opts.floor, -opts.floor);
        path.overflowed = true;
        frozen = true;
      }
    }
    if ((k + 1) % static_cast<uint64_t>(stride) == 0 || k + 1 == steps) {
      path.t.push_back(t_next);
      path.s.push_back(s);
    }
  }
  path.final_value = s;
  return path;
}

}  // namespace

namespace {
template <class DriftFn>
double scalar_heun(double s, double xi_norm, double dt, double dW, DriftFn&& f) {
  auto drift = [&](const StateVec& y) { return StateVec{f(y[0])}; };
  auto noise = [&](const StateVec& y) { return StateVec{xi_norm * y[0] * dW}; };
  return heun_step(StateVec{s}, dt, drift, noise)[0];
}
}  // namespace

double comparison_sde_step(double s, double M, double xi_norm, double dt, double dW) {
  const double xi2 = xi_norm * xi_norm;
  return scalar_heun(s, xi_norm, dt, dW,
                     [&](double x) { return -(0.5 * x * x - 0.5 * xi2 * x + M); });
}

double breaking_envelope_step(double s, double M, double xi_norm, double dt, double dW) {
  return scalar_heun(s, xi_norm, dt, dW, [&](double x) { return -0.5 * x * x + M; });
}

SlopePath comparison_sde_path(const SlopeSdeParams& p, const CounterRng& rng,
                              const PathOptions& opts) {
  const double xi2 = p.xi_norm * p.xi_norm;
  return run_scalar_path(p, rng, opts, [&](double s) {
    return -(0.5 * s * s - 0.5 * xi2 * s + p.M);
  });
}

SlopePath breaking_envelope_sde_path(const SlopeSdeParams& p, const CounterRng& rng,
                                     const PathOptions& opts) {
  return run_scalar_path(p, rng, opts,
                         [&](double s) { return -0.5 * s * s + p.M; });
}

double riccati_mean_bound(const SlopeSdeParams& p, double t) {
  p.validate();
  const double a = 0.5 * (1.0 - p.eps);
  const double b = p.M + p.xi_norm * p.xi_norm / (2.0 * p.eps);
  const double r = std::sqrt(b / a);
  require(p.s0 < -r, ErrorKind::Precondition,
          "riccati_mean_bound: requires s0 < -sqrt(b/a)");
  if (t <= 0.0) return p.s0;
  const double sigma = std::atanh(r / p.s0);  // < 0
  const double arg = sigma + t * std::sqrt(a * b);
  if (arg >= 0.0) return -std::numeric_limits<double>::infinity();
  return r / std::tanh(arg);
}

double riccati_bound_blowup_time(const SlopeSdeParams& p) {
  p.validate();
  const double a = 0.5 * (1.0 - p.eps);
  const double b = p.M + p.xi_norm * p.xi_norm / (2.0 * p.eps);
  const double r = std::sqrt(b / a);
  require(p.s0 < -r, ErrorKind::Precondition,
          "riccati_bound_blowup_time: requires s0 < -sqrt(b/a)");
  return -std::atanh(r / p.s0) / std::sqrt(a * b);
}

double bm_drift_max_prob(double mu, double sigma, double a) {
  require(mu < 0.0, ErrorKind::Precondition, "bm_drift_max_prob: requires mu < 0");
  require(sigma > 0.0, ErrorKind::Precondition, "bm_drift_max_prob: requires sigma > 0");
  require(a >= 0.0, ErrorKind::Precondition, "bm_drift_max_prob: requires a >= 0");
  return std::exp(-a * 2.0 * std::fabs(mu) / (sigma * sigma));
}

void wilson_interval(int successes, int n, double& low, double& high) {
  const double z = 1.959963984540054;  // 95%
  const double z2 = z * z;
  const double ph = static_cast<double>(successes) / n;
  const double denom = 1.0 + z2 / n;
  const double center = (ph + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
  low = std::max(0.0, center - half);
  high = std::min(1.0, center + half);
}

EnsembleSummary mc_breaking_probability(const SlopeSdeParams& p, int n_paths,
                                        uint64_t master_seed, McProcess process) {
  p.validate();
  require(n_paths >= 100, ErrorKind::InvalidArgument,
          "mc_breaking_probability: n_paths must be >= 100");

  const uint64_t steps = static_cast<uint64_t>(std::llround(p.T / p.dt));
  const int stride = static_cast<int>(std::max<uint64_t>(1, steps / 400));

  std::vector<SlopePath> paths(static_cast<size_t>(n_paths));
  parallel_for(n_paths, [&](int i) {
    CounterRng rng(master_seed, static_cast<uint64_t>(i));
    PathOptions opts;
    opts.output_stride = stride;
    paths[static_cast<size_t>(i)] =
        process == McProcess::Envelope
            ? breaking_envelope_sde_path(p, rng, opts)
            : comparison_sde_path(p, rng, opts);
  });

  EnsembleSummary out;
  out.n_paths = n_paths;
  out.master_seed = master_seed;
  for (int i = 0; i < n_paths; ++i) {
    const auto& path = paths[static_cast<size_t>(i)];
    PathOutcome o;
    o.path_index = static_cast<uint64_t>(i);
    o.broken = path.breaking_time.has_value();
    o.breaking_time = o.broken ? *path.breaking_time : kNaN;
    out.outcomes.push_back(o);
    if (o.broken) ++out.n_broken;
  }
  out.p_hat = static_cast<double>(out.n_broken) / n_paths;
  wilson_interval(out.n_broken, n_paths, out.wilson_low, out.wilson_high);

  // mean-slope series: all paths share the record grid; frozen paths carry
  // their last value, so the sample mean genuinely diverges
  const size_t n_rec = paths.front().t.size();
  out.mean_slope.resize(n_rec);
  for (size_t r = 0; r < n_rec; ++r) {
    double mean = 0.0;
    for (const auto& path : paths) mean += path.s[r];
    mean /= n_paths;
    double var = 0.0;
    for (const auto& path : paths) {
      const double d = path.s[r] - mean;
      var += d * d;
    }
    var /= (n_paths - 1);
    out.mean_slope[r] = {paths.front().t[r], mean, std::sqrt(var / n_paths)};
  }
  return out;
}

}  // namespace chlab
