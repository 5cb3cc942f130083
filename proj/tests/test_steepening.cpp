#include <doctest.h>

#include <cmath>

#include "ch_pde.hpp"
#include "errors.hpp"
#include "functionals.hpp"
#include "grid.hpp"
#include "oracles.hpp"
#include "spectral.hpp"
#include "steepening.hpp"

using namespace chlab;

namespace {

Field antisym_field(const Grid& g, double A, double w) {
  const double c = 0.5 * g.length;
  return make_field(g, [&](double x) {
    const double y = g.periodic_delta(x, c);
    return -A * (y / w) * std::exp(-y * y / (2.0 * w * w));
  });
}

double riccati_oracle(double s0, double M, double t) {
  return oracle::integrate_ode(
      [M](double s, double) { return -0.5 * s * s + M; }, s0, t, 1e-6);
}

}  // namespace

TEST_CASE("find_inflection: -sin(x) has its negative-slope inflection at 0") {
  Grid g = Grid::make(256, 2.0 * M_PI);
  Field u = make_field(g, [](double x) { return -std::sin(x); });
  auto nu = find_inflection(u);
  REQUIRE(nu.has_value());
  // x = pi has u_xx sign change but positive slope; x = 0 is the one
  const double d = std::min(*nu, g.length - *nu);
  CHECK(d < 1e-10);
}

TEST_CASE("find_inflection: Gaussian bump inflects at center + width") {
  Grid g = Grid::make(512, 20.0);
  const double c = 8.0, w = 1.3;
  Field u = make_field(g, [&](double x) {
    const double y = g.periodic_delta(x, c);
    return std::exp(-y * y / (2.0 * w * w));
  });
  auto nu = find_inflection(u);
  REQUIRE(nu.has_value());
  CHECK(*nu == doctest::Approx(c + w).epsilon(1e-3));
}

TEST_CASE("find_inflection: constants and pure peakons have none") {
  Grid g = Grid::make(256, 30.0);
  Field c(g);
  for (auto& v : c.values) v = 1.1;
  CHECK_FALSE(find_inflection(c).has_value());

  // discrete peakon: the corner is a momentum spike, not an inflection
  Field m(g);
  m[128] = 1.0 / g.dx();
  Field peakon = helmholtz_invert(m);
  CHECK_FALSE(find_inflection(peakon).has_value());
}

TEST_CASE("find_inflection honors the hint") {
  Grid g = Grid::make(512, 40.0);
  // two bumps -> several inflections; hint selects the nearest
  Field u = make_field(g, [&](double x) {
    const double y1 = g.periodic_delta(x, 10.0);
    const double y2 = g.periodic_delta(x, 28.0);
    return std::exp(-y1 * y1 / 2.0) + 0.8 * std::exp(-y2 * y2 / 2.0);
  });
  auto near1 = find_inflection(u, 11.2);
  auto near2 = find_inflection(u, 29.3);
  REQUIRE(near1.has_value());
  REQUIRE(near2.has_value());
  CHECK(*near1 == doctest::Approx(11.0).epsilon(2e-2));
  CHECK(*near2 == doctest::Approx(29.0).epsilon(2e-2));
}

TEST_CASE("coth_envelope: anchor values and the ODE oracle") {
  // t = 0 returns s0 for any admissible pair
  CHECK(coth_envelope(-2.0, 0.5, 0.0) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(coth_envelope(-7.0, 3.0, 0.0) == doctest::Approx(-7.0).epsilon(1e-12));

  // M = 1/2, s0 = -2: sigma = atanh(-1/2), pole at ln 3
  CHECK(breaking_time_bound(-2.0, 0.5) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
  for (double t : {0.2, 0.5, 0.8, 1.0}) {
    CHECK(coth_envelope(-2.0, 0.5, t) ==
          doctest::Approx(riccati_oracle(-2.0, 0.5, t)).epsilon(1e-5));
  }
  CHECK(coth_envelope(-2.0, 0.5, std::log(3.0) + 1e-12) ==
        -std::numeric_limits<double>::infinity());

  // M -> 0 limit: s0/(1 + s0 t / 2), pole at -2/s0
  CHECK(coth_envelope(-2.0, 0.0, 0.5) == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(coth_envelope(-2.0, 0.0, 0.5) ==
        doctest::Approx(riccati_oracle(-2.0, 0.0, 0.5)).epsilon(1e-5));
  CHECK(breaking_time_bound(-2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(coth_envelope(-2.0, 0.0, 1.0) == -std::numeric_limits<double>::infinity());

  // continuity of the M -> 0 limit
  CHECK(coth_envelope(-2.0, 1e-12, 0.5) ==
        doctest::Approx(coth_envelope(-2.0, 0.0, 0.5)).epsilon(1e-5));

  // (-2 sqrt 2, M = 1): bound = 2 atanh(1/2) / sqrt 2
  CHECK(breaking_time_bound(-2.0 * std::sqrt(2.0), 1.0) ==
        doctest::Approx(0.776850).epsilon(1e-5));

  // s0 -> -inf: bound -> 0+
  CHECK(breaking_time_bound(-1e9, 1.0) < 1e-8);
  CHECK(breaking_time_bound(-1e9, 1.0) > 0.0);

  // hypothesis s0 < -sqrt(2M) enforced
  CHECK_THROWS_AS(coth_envelope(-1.0, 0.5, 0.1), Error);
  CHECK_THROWS_AS(breaking_time_bound(-0.9, 0.5), Error);
}

TEST_CASE("detect_blowup: crossing, absence, precondition") {
  std::vector<SlopeRecord> recs;
  for (int k = 0; k <= 100; ++k) {
    SlopeRecord r;
    r.t = 0.01 * k;
    r.s = -2.0 / (1.0 - 0.0099 * k);  // steepens toward -200 by k = 100
    recs.push_back(r);
  }
  auto t = detect_blowup(recs, -30.0);
  REQUIRE(t.has_value());
  CHECK(*t == doctest::Approx(0.95).epsilon(1e-2));
  CHECK_FALSE(detect_blowup(recs, -1000.0).has_value());
  CHECK_THROWS_AS(detect_blowup(recs, +5.0), Error);
  CHECK_THROWS_AS(detect_blowup(recs, -10.0), Error);  // |thr| < 10 |s0|
}

TEST_CASE("track: stationary antisymmetric profile pins nu at the symmetry point") {
  Grid g = Grid::make(1024, 20.0);
  Field u0 = antisym_field(g, 1.0, 0.8);
  EvolveOptions opts;
  opts.dt = 2e-4;
  opts.T = 0.4;
  opts.output_stride = 200;
  Trajectory traj = simulate(u0, NoiseBasis{}, opts, CounterRng(0, 0));
  std::vector<SlopeRecord> recs = track(traj);
  REQUIRE(recs.size() == traj.snapshots.size());
  for (const auto& r : recs) {
    CHECK(std::fabs(g.periodic_delta(r.nu, 10.0)) < g.dx());
    CHECK(std::fabs(r.u_at_nu) < 1e-10);  // u(nu) = 0 by antisymmetry
    CHECK(r.s < 0.0);
  }
  // slope strictly decreases while tracked
  for (size_t i = 1; i < recs.size(); ++i) CHECK(recs[i].s < recs[i - 1].s);
}

TEST_CASE("track: single peakon data yields an empty record list") {
  Grid g = Grid::make(512, 40.0);
  Field m(g);
  m[128] = 1.0 / g.dx();
  Field u0 = helmholtz_invert(m);
  EvolveOptions opts;
  opts.dt = 1e-3;
  opts.T = 0.05;
  opts.output_stride = 10;
  Trajectory traj = simulate(u0, NoiseBasis{}, opts, CounterRng(0, 0));
  CHECK(track(traj).empty());
}

TEST_CASE("track throws TrackingLost when the bracket jumps") {
  Grid g = Grid::make(256, 30.0);
  auto bump_at = [&](double c) {
    return make_field(g, [&](double x) {
      const double y = g.periodic_delta(x, c);
      return std::exp(-y * y / 2.0);
    });
  };
  Trajectory fake;
  fake.grid = g;
  fake.times = {0.0, 0.1};
  fake.snapshots = {bump_at(5.0), bump_at(20.0)};  // inflection jumps ~15 > L/10
  try {
    track(fake);
    FAIL("expected TrackingLost");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TrackingLost);
  }
}

TEST_CASE("tracked records satisfy the slope evolution identity") {
  // ds/dt = -s^2/2 + u^2(nu) - K*(u^2 + ux^2/2)(nu) at the fixed inflection
  Grid g = Grid::make(2048, 20.0);
  Field u0 = antisym_field(g, 1.5, 0.8);
  EvolveOptions opts;
  opts.dt = 1e-4;
  opts.T = 0.3;
  opts.output_stride = 1;
  opts.track_slope = true;
  opts.store_snapshots = false;
  Trajectory traj = simulate(u0, NoiseBasis{}, opts, CounterRng(0, 0));
  REQUIRE(traj.slope.size() > 1000);
  size_t checked = 0;
  for (size_t i = 200; i + 200 < traj.slope.size(); i += 100) {
    const auto& a = traj.slope[i - 100];
    const auto& b = traj.slope[i + 100];
    const auto& mid = traj.slope[i];
    const double ds_dt = (b.s - a.s) / (b.t - a.t);
    const double rhs = -0.5 * mid.s * mid.s + mid.u_at_nu * mid.u_at_nu -
                       mid.kconv_at_nu;
    CHECK(ds_dt == doctest::Approx(rhs).epsilon(5e-3));
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("attach_envelope fills the coth column when the hypothesis holds") {
  std::vector<SlopeRecord> recs(3);
  recs[0] = {0.0, 0.0, -2.0, 0.0, 0.0, 0.0};
  recs[1] = {0.25, 0.0, -2.6, 0.0, 0.0, 0.0};
  recs[2] = {0.5, 0.0, -3.4, 0.0, 0.0, 0.0};
  attach_envelope(recs, 0.5);
  CHECK(recs[0].envelope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(recs[1].envelope == doctest::Approx(riccati_oracle(-2.0, 0.5, 0.25)).epsilon(1e-5));

  // hypothesis violated: s0 >= -sqrt(2M) leaves the default NaN in place
  std::vector<SlopeRecord> flat(2);
  flat[0].t = 0.0;
  flat[0].s = -0.5;
  flat[1].t = 0.1;
  flat[1].s = -0.6;
  attach_envelope(flat, 2.0);
  CHECK(std::isnan(flat[0].envelope));
}
