#include "steepening.hpp"

#include <cmath>
#include <limits>

#include "errors.hpp"
#include "spectral.hpp"

namespace chlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Candidate {
  double nu;
  double s;
};

// Sign changes of u_xx across grid cells, linearly interpolated, keeping only
// negative-slope crossings. When locating an inflection from scratch
// (strict mode), the crossing must be monotone across the surrounding 4-node
// window: a peakon corner reverses (single spike node) and Gibbs ripples in a
// kinked field oscillate, while a genuine inflection of a resolved profile
// descends or ascends through zero. Hinted tracking drops the filter and
// relies on continuity, so a steepening front is followed all the way down
// even once its curvature peak sits on a couple of cells.
std::vector<Candidate> crossings(const Field& u, const Field& ux, const Field& uxx,
                                 bool strict) {
  const Grid& g = u.grid;
  const int n = g.n;
  double uxx_scale = 0.0;
  for (double v : uxx.values) uxx_scale = std::max(uxx_scale, std::fabs(v));
  std::vector<Candidate> out;
  for (int j = 0; j < n; ++j) {
    const double a = uxx[j];
    const double b = uxx[(j + 1) % n];
    if (std::fabs(a) + std::fabs(b) <= 1e-10 * uxx_scale) continue;  // roundoff
    if (a * b > 0.0) continue;
    if (strict) {
      const double l = uxx[(j - 1 + n) % n];
      const double r = uxx[(j + 2) % n];
      const double slack = 1e-9 * (std::fabs(a) + std::fabs(b));
      const bool ascending = l <= a + slack && a <= b + slack && b <= r + slack;
      const bool descending = l + slack >= a && a + slack >= b && b + slack >= r;
      if (!ascending && !descending) continue;
    }
    const double frac = (a == b) ? 0.0 : a / (a - b);
    const double s = ux[j] * (1.0 - frac) + ux[(j + 1) % n] * frac;
    if (s >= 0.0) continue;
    out.push_back({std::fmod((j + frac) * g.dx(), g.length), s});
  }
  return out;
}

std::optional<Candidate> pick(const Field& u, const Field& ux, const Field& uxx,
                              std::optional<double> hint) {
  auto cands = crossings(u, ux, uxx, /*strict=*/!hint.has_value());
  if (cands.empty()) return std::nullopt;
  const Grid& g = u.grid;
  if (hint) {
    const Candidate* best = nullptr;
    double bestd = kInf;
    for (const auto& c : cands) {
      double d = std::fabs(g.periodic_delta(c.nu, *hint));
      if (d < bestd) {
        bestd = d;
        best = &c;
      }
    }
    return *best;
  }
  int jmax = 0;
  for (int j = 1; j < g.n; ++j)
    if (u[j] > u[jmax]) jmax = j;
  const double xmax = g.node(jmax);
  const Candidate* best = nullptr;
  double bestd = kInf;
  for (const auto& c : cands) {
    double d = std::fmod(c.nu - xmax + g.length, g.length);
    if (d <= 0.0) d += g.length;  // strictly to the right, wrapping
    if (d < bestd) {
      bestd = d;
      best = &c;
    }
  }
  return *best;
}

}  // namespace

std::optional<double> find_inflection(const Field& u, std::optional<double> hint) {
  check_finite(u, "find_inflection input");
  Spectrum c = analyze(u);
  Spectrum cx = c;
  apply_derivative(cx, u.grid);
  Spectrum cxx = cx;
  apply_derivative(cxx, u.grid);
  Field ux = synthesize(u.grid, cx);
  Field uxx = synthesize(u.grid, cxx);
  auto r = pick(u, ux, uxx, hint);
  if (!r) return std::nullopt;
  return r->nu;
}

std::optional<SlopeRecord> slope_probe(const Field& u, double t,
                                       std::optional<double> hint) {
  if (!u.finite()) return std::nullopt;
  const Grid& g = u.grid;
  Spectrum c = analyze(u);
  Spectrum cx = c;
  apply_derivative(cx, g);
  Spectrum cxx = cx;
  apply_derivative(cxx, g);
  Field ux = synthesize(g, cx);
  Field uxx = synthesize(g, cxx);
  auto r = pick(u, ux, uxx, hint);
  if (!r) return std::nullopt;

  // K*(u^2 + ux^2/2) via the same dealiased route as the rhs
  Field uf = synthesize_fine(g, pad2(c, g));
  Field uxf = synthesize_fine(g, pad2(cx, g));
  std::vector<double> w(static_cast<size_t>(2 * g.n));
  for (int j = 0; j < 2 * g.n; ++j)
    w[static_cast<size_t>(j)] = uf[j] * uf[j] + 0.5 * uxf[j] * uxf[j];
  Spectrum cw = truncate2(analyze_fine(g, w), g);
  apply_helmholtz_inverse(cw, g);
  Field kconv = synthesize(g, cw);

  SlopeRecord rec;
  rec.t = t;
  rec.nu = r->nu;
  rec.s = r->s;
  rec.u_at_nu = interp_linear(u, r->nu);
  rec.kconv_at_nu = interp_linear(kconv, r->nu);
  return rec;
}

std::vector<SlopeRecord> track(const Trajectory& traj) {
  std::vector<SlopeRecord> out;
  std::optional<double> hint;
  for (size_t i = 0; i < traj.snapshots.size(); ++i) {
    auto rec = slope_probe(traj.snapshots[i], traj.times[i], hint);
    if (!rec) break;  // NoInflection ends tracking (empty list if at t=0)
    if (hint) {
      double jump = std::fabs(traj.grid.periodic_delta(rec->nu, *hint));
      if (jump > traj.grid.length / 10.0)
        throw Error(ErrorKind::TrackingLost,
                    "inflection bracket jumped by " + std::to_string(jump) +
                        " (> L/10) between strides at t=" + std::to_string(rec->t));
    }
    hint = rec->nu;
    out.push_back(*rec);
  }
  return out;
}

double coth_envelope(double s0, double M, double t) {
  require(M >= 0.0, ErrorKind::InvalidArgument, "coth_envelope: M must be >= 0");
  require(s0 < -std::sqrt(2.0 * M), ErrorKind::Precondition,
          "coth_envelope: requires s0 < -sqrt(2M)");
  if (t < 0.0) return s0;
  if (M == 0.0) {
    double denom = 1.0 + 0.5 * s0 * t;
    return denom <= 0.0 ? -kInf : s0 / denom;
  }
  const double r = std::sqrt(2.0 * M);
  const double sigma = std::atanh(r / s0);  // coth^{-1}(s0/r) < 0
  const double arg = sigma + 0.5 * t * r;
  if (arg >= 0.0) return -kInf;
  return r / std::tanh(arg);
}

double breaking_time_bound(double s0, double M) {
  require(M >= 0.0, ErrorKind::InvalidArgument, "breaking_time_bound: M must be >= 0");
  require(s0 < -std::sqrt(2.0 * M), ErrorKind::Precondition,
          "breaking_time_bound: requires s0 < -sqrt(2M)");
  if (M == 0.0) return -2.0 / s0;
  const double r = std::sqrt(2.0 * M);
  return -2.0 * std::atanh(r / s0) / r;
}

void attach_envelope(std::vector<SlopeRecord>& records, double M) {
  if (records.empty()) return;
  const double s0 = records.front().s;
  const double t0 = records.front().t;
  if (!(s0 < -std::sqrt(2.0 * std::max(M, 0.0)))) return;  // hypothesis fails: leave NaN
  for (auto& r : records) r.envelope = coth_envelope(s0, M, r.t - t0);
}

std::optional<double> detect_blowup(const std::vector<SlopeRecord>& records,
                                    double slope_threshold) {
  require(slope_threshold < 0.0, ErrorKind::Precondition,
          "detect_blowup: threshold must be negative");
  if (records.empty()) return std::nullopt;
  require(std::fabs(slope_threshold) >= 10.0 * std::fabs(records.front().s),
          ErrorKind::Precondition,
          "detect_blowup: |threshold| must be >= 10 |s0|");
  for (const auto& r : records)
    if (r.s <= slope_threshold) return r.t;
  return std::nullopt;
}

}  // namespace chlab
