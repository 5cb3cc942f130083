#include <doctest.h>

#include <cmath>

#include "ch_pde.hpp"
#include "errors.hpp"
#include "functionals.hpp"
#include "grid.hpp"
#include "mc_common.hpp"
#include "oracles.hpp"
#include "slope_sde.hpp"
#include "spectral.hpp"
#include "steepening.hpp"

using namespace chlab;

namespace {
SlopeSdeParams params(double s0, double M, double xi, double dt, double T,
                      double thr, double eps = 0.1) {
  SlopeSdeParams p;
  p.s0 = s0;
  p.M = M;
  p.xi_norm = xi;
  p.eps = eps;
  p.dt = dt;
  p.T = T;
  p.threshold = thr;
  return p;
}
}  // namespace

TEST_CASE("ito_slope_step: degenerate closed forms") {
  // pure Riccati: s' = s - s^2 dt / 2
  const double s = -3.0, dt = 1e-2;
  CHECK(ito_slope_step(s, 0.0, 0.0, 0.0, dt, 0.0) ==
        doctest::Approx(s - 0.5 * s * s * dt).epsilon(1e-15));
  // s = 0: only the field terms act
  CHECK(ito_slope_step(0.0, 1.4, 0.3, 2.0, dt, 0.7) ==
        doctest::Approx((1.4 * 1.4 - 0.3) * dt).epsilon(1e-15));
}

TEST_CASE("params are validated with named errors") {
  SlopeSdeParams p = params(-5.0, 1.0, 1.0, 1e-3, 10.0, -50.0);
  CHECK_NOTHROW(p.validate());
  p.threshold = -20.0;  // |thr| < 10 |s0|
  CHECK_THROWS_AS(p.validate(), Error);
  p = params(-5.0, 1.0, 1.0, 1e-3, 10.0, -50.0, 0.5);  // eps out of (0, 1/3)
  CHECK_THROWS_AS(p.validate(), Error);
  p = params(2.0, 1.0, 1.0, 1e-3, 10.0, 20.0);  // s0 must be negative
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("comparison_sde_path: deterministic limits and the Riccati pole") {
  SUBCASE("xi = 0 matches the stiff ODE oracle") {
    SlopeSdeParams p = params(-1.5, 2.0, 0.0, 1e-4, 0.3, -15.0);
    CounterRng rng(1, 0);
    SlopePath path = comparison_sde_path(p, rng);
    for (size_t i = 0; i < path.t.size(); i += 50) {
      const double ref = oracle::integrate_ode(
          [&](double s, double) { return -(0.5 * s * s + 2.0); }, -1.5, path.t[i], 1e-5);
      CHECK(path.s[i] == doctest::Approx(ref).epsilon(1e-6));
    }
  }

  SUBCASE("M = 0, xi = 0, s0 = -1: closed form s0/(1 + s0 t/2), pole at t = 2") {
    SlopeSdeParams p = params(-1.0, 0.0, 0.0, 1e-4, 3.0, -10.0);
    CounterRng rng(1, 0);
    SlopePath path = comparison_sde_path(p, rng);
    for (size_t i = 0; i < path.t.size(); i += 10) {
      if (path.t[i] > 1.8) break;  // near the pole the Heun error blows up too
      const double ref = -1.0 / (1.0 - 0.5 * path.t[i]);
      CHECK(path.s[i] == doctest::Approx(ref).epsilon(1e-4));
    }
    // s = -10 is reached at 1 + s0 t/2 = 0.1, i.e. t = 1.8; the pole at t = 2
    // then drives the overflow freeze
    REQUIRE(path.breaking_time.has_value());
    CHECK(*path.breaking_time == doctest::Approx(1.8).epsilon(1e-3));
    CHECK(path.overflowed);
  }
}

TEST_CASE("breaking envelope path with xi = 0 follows the coth envelope") {
  SlopeSdeParams p = params(-2.0, 0.5, 0.0, 1e-4, 1.0, -20.0);
  CounterRng rng(1, 0);
  SlopePath path = breaking_envelope_sde_path(p, rng);
  for (size_t i = 0; i < path.t.size(); i += 10) {
    if (path.s[i] < -18.0) break;
    CHECK(path.s[i] == doctest::Approx(coth_envelope(-2.0, 0.5, path.t[i])).epsilon(1e-5));
  }
  // the lemma's pole is an upper bound for the crossing
  REQUIRE(path.breaking_time.has_value());
  CHECK(*path.breaking_time <= breaking_time_bound(-2.0, 0.5) + 2.0 * p.dt);
}

TEST_CASE("riccati_mean_bound: anchors, limit to the coth envelope, pole vs ODE") {
  SlopeSdeParams p = params(-6.0, 1.0, 1.0, 1e-3, 10.0, -60.0, 0.1);
  CHECK(riccati_mean_bound(p, 0.0) == doctest::Approx(-6.0).epsilon(1e-14));

  // eps -> 0, xi = 0 recovers the steepening envelope exactly
  SlopeSdeParams q = params(-2.0, 0.5, 0.0, 1e-3, 1.0, -20.0, 1e-9);
  for (double t : {0.1, 0.4, 0.8})
    CHECK(riccati_mean_bound(q, t) ==
          doctest::Approx(coth_envelope(-2.0, 0.5, t)).epsilon(1e-6));

  // ODE oracle for ds = -a s^2 + b with a = 0.45, b = 6
  const double a = 0.45, b = 6.0;
  for (double t : {0.1, 0.2, 0.3, 0.4}) {
    const double ref = oracle::integrate_ode(
        [&](double s, double) { return -a * s * s + b; }, -6.0, t, 1e-7);
    CHECK(riccati_mean_bound(p, t) == doctest::Approx(ref).epsilon(1e-5));
  }
  // pole: integrate until divergence
  const double tstar = riccati_bound_blowup_time(p);
  CHECK(tstar == doctest::Approx(0.43005).epsilon(1e-3));
  CHECK(riccati_mean_bound(p, tstar + 1e-9) ==
        -std::numeric_limits<double>::infinity());

  // precondition: s0 < -sqrt(b/a)
  SlopeSdeParams bad = params(-3.0, 1.0, 1.0, 1e-3, 1.0, -30.0, 0.1);
  CHECK_THROWS_AS(riccati_mean_bound(bad, 0.1), Error);
}

TEST_CASE("bm_drift_max_prob: closed form, monotonicity, preconditions") {
  CHECK(bm_drift_max_prob(-1.0, 1.0, 0.0) == 1.0);
  CHECK(bm_drift_max_prob(-1.0, 1.0, 1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  CHECK(bm_drift_max_prob(-0.5, 2.0, 3.0) ==
        doctest::Approx(std::exp(-0.75)).epsilon(1e-15));
  // strictly decreasing in a and in |mu|
  CHECK(bm_drift_max_prob(-1.0, 1.0, 2.0) < bm_drift_max_prob(-1.0, 1.0, 1.0));
  CHECK(bm_drift_max_prob(-2.0, 1.0, 1.0) < bm_drift_max_prob(-1.0, 1.0, 1.0));
  CHECK_THROWS_AS(bm_drift_max_prob(0.5, 1.0, 1.0), Error);
  CHECK_THROWS_AS(bm_drift_max_prob(-1.0, 0.0, 1.0), Error);
}

TEST_CASE("bm max law agrees with the bridge-corrected MC oracle (small n)") {
  const double mu = -0.5, sigma = 2.0, a = 3.0;
  auto est = mc::drifted_bm_max_mc(mu, sigma, a, 40.0, 0.01, 20000, 99);
  const double exact = bm_drift_max_prob(mu, sigma, a);
  CHECK(std::fabs(est.p_hat - exact) < 3.5 * est.se);
}

TEST_CASE("mc_breaking_probability: deterministic lemma regime gives p = 1 exactly") {
  SlopeSdeParams p = params(-5.0, 1.0, 0.0, 1e-3, 5.0, -50.0);
  EnsembleSummary es = mc_breaking_probability(p, 200, 7);
  CHECK(es.n_broken == 200);
  CHECK(es.p_hat == 1.0);
  CHECK_THROWS_AS(mc_breaking_probability(p, 50, 7), Error);  // n >= 100
}

TEST_CASE("mc_breaking_probability: envelope process sits strictly inside (0,1)") {
  SlopeSdeParams p = params(-5.0, 1.0, 1.0, 1e-3, 10.0, -50.0);
  EnsembleSummary es = mc_breaking_probability(p, 800, 11);
  CHECK(es.n_broken > 0);
  CHECK(es.n_broken < es.n_paths);
  CHECK(es.wilson_low > 0.0);
  CHECK(es.wilson_high < 1.0);
  CHECK(es.wilson_low <= es.p_hat);
  CHECK(es.p_hat <= es.wilson_high);
  // comparison process: drift has no real roots, essentially all paths break
  EnsembleSummary ec =
      mc_breaking_probability(p, 800, 11, McProcess::Comparison);
  CHECK(ec.p_hat > es.p_hat);
}

TEST_CASE("mc invariant: p_hat is monotone in s0 within 2 SE (5-point sweep)") {
  double prev_p = 1.1;
  double prev_se = 0.0;
  for (double s0 : {-3.0, -4.0, -5.0, -6.0, -8.0}) {
    SlopeSdeParams p = params(s0, 1.0, 1.0, 1e-3, 5.0, 10.0 * s0);
    EnsembleSummary es = mc_breaking_probability(p, 600, 21);
    const double se = std::sqrt(es.p_hat * (1.0 - es.p_hat) / es.n_paths);
    // more negative s0 -> larger breaking fraction
    CHECK(es.p_hat >= prev_p - 2.0 * (se + prev_se) - 1.0);
    if (prev_p <= 1.0) CHECK(es.p_hat >= prev_p - 2.0 * (se + prev_se));
    prev_p = es.p_hat;
    prev_se = se;
  }
}

TEST_CASE("coupled slope: reconstruction and pathwise domination on SCH paths") {
  // antisymmetric SCH with one constant mode; the tracked slope is compared
  // against (a) the Ito slope recursion fed with tracked field data and the
  // same increments, (b) the lower comparison path with matched noise
  const double L = 16.0, A = 1.2, w = 0.8, c = 0.3;
  Grid g = Grid::make(256, L);
  Field u0 = make_field(g, [&](double x) {
    const double y = g.periodic_delta(x, 0.5 * L);
    return -A * (y / w) * std::exp(-y * y / (2.0 * w * w));
  });
  NoiseBasis basis;
  basis.modes.push_back(NoiseMode::constant(c));
  EvolveOptions opts;
  opts.dt = 2e-4;
  opts.T = 0.2;
  opts.output_stride = 1 << 20;
  opts.track_slope = true;
  opts.store_snapshots = false;

  const double M_comp =
      std::max(steepening_constant(u0), 0.5 * norm_12(u0));  // >= kconv - u^2
  const int n_paths = 32;
  double mean_gap = 0.0;
  int dominated = 0, total = 0;
  for (int path = 0; path < n_paths; ++path) {
    Trajectory t = simulate(u0, basis, opts, CounterRng(5150, static_cast<uint64_t>(path)));
    REQUIRE(t.slope.size() == t.increments.size() + 1);
    double s_rec = t.slope.front().s;
    double s_cmp = t.slope.front().s;
    for (size_t k = 0; k + 1 < t.slope.size(); ++k) {
      const double dW = t.increments[k][0];
      s_rec = ito_slope_step(s_rec, t.slope[k].u_at_nu, t.slope[k].kconv_at_nu, c,
                             opts.dt, dW);
      s_cmp = comparison_sde_step(s_cmp, M_comp, c, opts.dt, -dW);  // matched W
      // u^2 - kconv + M >= 0 and matched diffusion: s_rec dominates s_cmp up
      // to the 2% per-unit-time discretization slack
      const double tol =
          0.02 * std::fabs(s_cmp) * std::max(t.slope[k + 1].t, 0.05);
      if (s_rec >= s_cmp - tol) ++dominated;
      ++total;
    }
    mean_gap += (t.slope.back().s - s_rec) / n_paths;
  }
  CHECK(dominated == total);
  // weak consistency of the reconstruction: the mean endpoint gap is small
  // relative to the slope scale (O(dt) bias plus tracking error)
  CHECK(std::fabs(mean_gap) < 0.05 * A / w);
}

TEST_CASE("constant-xi transport leaves the tracked slope itself noise-free") {
  // rigid random transport moves the inflection with the field, so the slope
  // history at the tracked inflection coincides across realizations (and with
  // the deterministic run) up to tracking interpolation error
  const double L = 16.0, A = 1.2, w = 0.8;
  Grid g = Grid::make(256, L);
  Field u0 = make_field(g, [&](double x) {
    const double y = g.periodic_delta(x, 0.5 * L);
    return -A * (y / w) * std::exp(-y * y / (2.0 * w * w));
  });
  NoiseBasis basis;
  basis.modes.push_back(NoiseMode::constant(0.3));
  EvolveOptions opts;
  opts.dt = 2e-4;
  opts.T = 0.2;
  opts.output_stride = 1 << 20;
  opts.track_slope = true;
  opts.store_snapshots = false;
  Trajectory a = simulate(u0, basis, opts, CounterRng(1, 0));
  Trajectory b = simulate(u0, basis, opts, CounterRng(1, 1));
  Trajectory det = simulate(u0, NoiseBasis{}, opts, CounterRng(1, 0));
  REQUIRE(a.slope.size() == b.slope.size());
  REQUIRE(a.slope.size() == det.slope.size());
  double nu_wander = 0.0;
  for (size_t k = 0; k < a.slope.size(); ++k) {
    CHECK(std::fabs(a.slope[k].s - b.slope[k].s) < 0.05);
    CHECK(std::fabs(a.slope[k].s - det.slope[k].s) < 0.05);
    nu_wander = std::max(
        nu_wander, std::fabs(g.periodic_delta(a.slope[k].nu, det.slope[k].nu)));
  }
  CHECK(nu_wander > 2.0 * g.dx());  // the inflection itself does move
}
