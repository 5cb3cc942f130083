// Acceptance suite: one pass/fail line per criterion, all tolerances pinned
// in code. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ch_pde.hpp"
#include "config.hpp"
#include "functionals.hpp"
#include "grid.hpp"
#include "io.hpp"
#include "isospectral.hpp"
#include "mc_common.hpp"
#include "parallel.hpp"
#include "peakon.hpp"
#include "rng.hpp"
#include "runner.hpp"
#include "slope_sde.hpp"
#include "spectral.hpp"
#include "steepening.hpp"
#include "steppers.hpp"

using namespace chlab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      detail << "  FAILED: " << what << "\n";
    }
  }
};

Field gaussian(const Grid& g, double a, double c, double w) {
  return make_field(g, [&](double x) {
    const double y = g.periodic_delta(x, c);
    return a * std::exp(-y * y / (2.0 * w * w));
  });
}

Field antisymmetric(const Grid& g, double A, double w) {
  const double c = 0.5 * g.length;
  return make_field(g, [&](double x) {
    const double y = g.periodic_delta(x, c);
    return -A * (y / w) * std::exp(-y * y / (2.0 * w * w));
  });
}

Field momentum_gaussian(const Grid& g, double a, double c, double w) {
  return helmholtz_invert(gaussian(g, a, c, w));
}

double linf_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (int j = 0; j < a.size(); ++j) m = std::max(m, std::fabs(a[j] - b[j]));
  return m;
}

// --- criterion 1: deterministic conservation --------------------------------

Outcome criterion_conservation() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  Grid g = Grid::make(1024, 40.0);
  Field u0 = gaussian(g, 1.0, 20.0, 1.0);
  EvolveOptions opts;
  opts.dt = 1e-4;
  opts.T = 10.0;
  opts.output_stride = 2000;
  opts.store_snapshots = false;
  Trajectory t = simulate(u0, NoiseBasis{}, opts, CounterRng(0, 0));
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  out.require(!t.broken, "run must reach T = 10 unbroken");
  const double h0 = t.diagnostics.front().h;
  const double m0 = t.diagnostics.front().momentum;
  double hd = 0.0, md = 0.0;
  for (const auto& d : t.diagnostics) {
    hd = std::max(hd, std::fabs(d.h / h0 - 1.0));
    md = std::max(md, std::fabs(d.momentum / m0 - 1.0));
  }
  out.require(hd <= 1e-6, "hamiltonian drift <= 1e-6");
  out.require(md <= 1e-6, "momentum drift <= 1e-6");
  out.require(wall <= 120.0, "runtime <= 2 min");
  out.detail << "h_drift=" << hd << " mom_drift=" << md << " wall=" << wall << "s";
  return out;
}

// --- criterion 2: peakon exactness ------------------------------------------

Outcome criterion_peakon_exactness() {
  Outcome out;
  const double L = 40.0, p = 1.0, T = 10.0;
  Grid g = Grid::make(1024, L);
  Field m(g);
  m[256] = p / g.dx();
  Field u0 = helmholtz_invert(m);

  EvolveOptions opts;
  opts.dt = 1e-3;
  opts.T = T;
  opts.output_stride = 500;
  Trajectory t = simulate(u0, NoiseBasis{}, opts, CounterRng(0, 0));
  out.require(!t.broken, "peakon run must not break");

  // the peakon ODE is the speed oracle: a single peakon moves at p/2
  PeakonDrift ode = peakon_drift(PeakonState{{10.0}, {p}});
  const double speed = ode.dq[0];
  Field ref = spectral_shift(u0, speed * T);
  const double shape_err = linf_diff(t.final_snapshot(), ref) / sup_norm(u0);
  out.require(shape_err <= 0.05, "L-inf shape error <= 5%");

  EmergentSpeeds sp = emergent_speeds(t, 1);
  const double speed_err = std::fabs(sp.speeds[0] / speed - 1.0);
  out.require(speed_err <= 0.02, "measured speed within 2% of p/2");
  out.detail << "shape_err=" << shape_err << " speed=" << sp.speeds[0]
             << " (oracle " << speed << ")";
  return out;
}

// --- criterion 3: emergence phenomenology -----------------------------------

Outcome criterion_emergence() {
  Outcome out;
  Grid g = Grid::make(1024, 40.0);
  Field u0 = gaussian(g, 2.0, 10.0, 1.0);
  EvolveOptions opts;
  opts.dt = 2e-3;
  opts.T = 20.0;
  opts.output_stride = 250;  // snapshot every 0.5
  Trajectory t = simulate(u0, NoiseBasis{}, opts, CounterRng(0, 0));
  out.require(!t.broken, "emergence run must complete");

  std::vector<Peak> late = find_peaks(t.final_snapshot(), 0.08, 5.0 * g.dx());
  out.require(late.size() >= 2, ">= 2 emergent peaks by T = 20");

  EmergentSpeeds sp = emergent_speeds(t, 2);
  // rank alignment: tallest is fastest
  out.require(sp.heights[0] > sp.heights[1], "heights are rank-ordered");
  out.require(sp.speeds[0] > sp.speeds[1], "speeds are rank-ordered like heights");
  for (int i = 0; i < 2; ++i) {
    const double ratio = sp.speeds[static_cast<size_t>(i)] / sp.heights[static_cast<size_t>(i)];
    out.require(std::fabs(ratio - 1.0) <= 0.10,
                "peak " + std::to_string(i) + " speed/height within 10%");
    out.detail << "peak" << i << ": v=" << sp.speeds[static_cast<size_t>(i)]
               << " h=" << sp.heights[static_cast<size_t>(i)] << " v/h=" << ratio << "  ";
  }
  out.detail << "n_peaks=" << late.size();
  return out;
}

// --- criterion 4: steepening lemma bounds -----------------------------------

Outcome criterion_steepening() {
  Outcome out;
  const double A = 2.0, w = 0.8, L = 10.0;
  Grid g = Grid::make(8192, L);
  Field u0 = antisymmetric(g, A, w);
  const double s0 = -A / w;
  const double M_sc = steepening_constant(u0);
  out.require(s0 < -std::sqrt(2.0 * M_sc), "hypothesis s0 < -sqrt(2M) holds");

  auto run = [&](double dt, double T) {
    EvolveOptions opts;
    opts.dt = dt;
    opts.T = T;
    opts.output_stride = 1 << 20;
    opts.track_slope = true;
    opts.store_snapshots = false;
    return simulate(u0, NoiseBasis{}, opts, CounterRng(0, 0));
  };
  const double dt = 1e-4;
  Trajectory t = run(dt, 0.72);

  // envelope check until |s| = 50, both the M = 0 fixed-inflection case and
  // the steepening-constant case (the former is tighter)
  double worst0 = -1e30, worst_sc = -1e30;
  bool reached = false;
  for (const auto& r : t.slope) {
    if (r.s <= -50.0) {
      reached = true;
      break;
    }
    const double env0 = coth_envelope(s0, 0.0, r.t);
    const double env_sc = coth_envelope(s0, M_sc, r.t);
    worst0 = std::max(worst0, (r.s - env0) / std::fabs(r.s));
    worst_sc = std::max(worst_sc, (r.s - env_sc) / std::fabs(r.s));
    out.require(std::fabs(g.periodic_delta(r.nu, 0.5 * L)) <= g.dx(),
                "nu pinned at the symmetry point");
    if (!out.pass) break;
  }
  out.require(reached, "tracked slope reaches -50");
  out.require(worst0 <= 0.05, "s_t <= coth envelope (M=0) + 5%|s|");
  out.require(worst_sc <= 0.05, "s_t <= coth envelope (M=sc) + 5%|s|");

  auto tb = detect_blowup(t.slope, -50.0);
  out.require(tb.has_value(), "breaking detected at the -50 threshold");
  if (tb) {
    out.require(*tb <= breaking_time_bound(s0, 0.0) + 2.0 * dt,
                "breaking time <= -2/s0 + 2dt");
    out.require(*tb <= breaking_time_bound(s0, M_sc) + 2.0 * dt,
                "breaking time <= -2 sigma/sqrt(2M) + 2dt");
    // dt-halving refinement agreement
    Trajectory th = run(0.5 * dt, 0.70);
    auto tbh = detect_blowup(th.slope, -50.0);
    out.require(tbh.has_value(), "refined run detects breaking too");
    if (tbh) out.require(std::fabs(*tb - *tbh) <= 2.0 * dt,
                         "dt-halving agreement within 2dt");
    out.detail << "t_break=" << *tb << (tbh ? *tbh - *tb : 0.0 / 0.0)
               << "(refined delta) bound0=" << breaking_time_bound(s0, 0.0)
               << " worst_env_slack=" << worst0;
  }
  return out;
}

// --- criterion 5: pathwise stochastic conservation --------------------------

Outcome criterion_pathwise_conservation() {
  Outcome out;
  Grid g = Grid::make(2048, 40.0);
  Field m = gaussian(g, 1.0, 10.0, 3.0 * g.dx());
  // unit-mass smoothed momentum spike -> traveling peakon profile
  const double mass = integrate(m);
  for (auto& v : m.values) v /= mass;
  Field u0 = helmholtz_invert(m);

  NoiseBasis basis;
  basis.modes.push_back(NoiseMode::constant(0.05));
  // dt sized so the Heun O(dt^2) deterministic bias stays well inside 1e-4
  EvolveOptions opts;
  opts.dt = 1.25e-4;
  opts.T = 1.0;
  opts.output_stride = 1000;
  opts.store_snapshots = false;

  const int n_paths = 10;
  std::vector<double> drift(n_paths, 1e30);
  std::vector<bool> broken(n_paths, false);
  parallel_for(n_paths, [&](int i) {
    Trajectory t = simulate(u0, basis, opts, CounterRng(20240601, static_cast<uint64_t>(i)));
    broken[static_cast<size_t>(i)] = t.broken;
    const double n0 = t.diagnostics.front().norm12;
    double worst = 0.0;
    for (const auto& d : t.diagnostics)
      worst = std::max(worst, std::fabs(d.norm12 / n0 - 1.0));
    drift[static_cast<size_t>(i)] = worst;
  });
  double worst = 0.0;
  for (int i = 0; i < n_paths; ++i) {
    out.require(!broken[static_cast<size_t>(i)], "path must not break");
    worst = std::max(worst, drift[static_cast<size_t>(i)]);
    out.require(drift[static_cast<size_t>(i)] <= 1e-4,
                "path " + std::to_string(i) + " norm_12 drift <= 1e-4");
  }
  out.detail << "worst pathwise norm12 drift=" << worst << " over " << n_paths
             << " paths (same bound for every realization)";
  return out;
}

// --- criterion 6: mean blow-up (Riccati bound) -------------------------------

Outcome criterion_mean_blowup() {
  Outcome out;
  SlopeSdeParams p;
  p.s0 = -6.0;
  p.M = 1.0;
  p.xi_norm = 1.0;
  p.eps = 0.1;
  p.dt = 1e-3;
  p.T = 2.0;
  p.threshold = -60.0;
  EnsembleSummary es = mc_breaking_probability(p, 10000, 601);

  const double tstar = riccati_bound_blowup_time(p);
  bool below = true;
  double t50 = -1.0;
  for (const auto& msp : es.mean_slope) {
    if (msp.t >= tstar) break;
    if (msp.mean > riccati_mean_bound(p, msp.t) + 2.0 * msp.se) below = false;
    if (t50 < 0.0 && msp.mean < -50.0) t50 = msp.t;
  }
  out.require(below, "E[s_t] <= riccati bound + 2 SE before the bound's pole");
  out.require(t50 >= 0.0 && t50 < tstar, "mean diverges past -50 before t*");
  out.detail << "t(mean<-50)=" << t50 << " t*=" << tstar << " p_hat=" << es.p_hat;
  return out;
}

// --- criterion 7: positive-probability breaking ------------------------------

Outcome criterion_breaking_probability() {
  Outcome out;
  SlopeSdeParams p;
  p.s0 = -5.0;
  p.M = 1.0;
  p.xi_norm = 1.0;
  p.eps = 0.1;
  p.dt = 1e-3;
  p.T = 10.0;
  p.threshold = -50.0;
  EnsembleSummary es = mc_breaking_probability(p, 10000, 701);
  out.require(es.wilson_low > 0.0, "Wilson lower bound strictly above 0");
  out.require(es.wilson_high < 1.0, "Wilson upper bound strictly below 1");
  out.require(es.n_broken > 0 && es.n_broken < es.n_paths,
              "both outcomes observed");

  SlopeSdeParams det = p;
  det.xi_norm = 0.0;  // lemma regime: s0 < -sqrt(2M)
  EnsembleSummary ed = mc_breaking_probability(det, 10000, 702);
  out.require(ed.p_hat == 1.0, "p_hat = 1 exactly when xi = 0");
  out.detail << "p_hat=" << es.p_hat << " wilson=[" << es.wilson_low << ", "
             << es.wilson_high << "] xi0_p_hat=" << ed.p_hat;
  return out;
}

// --- criterion 8: drifted-BM maximum law -------------------------------------

Outcome criterion_bm_max_law() {
  Outcome out;
  struct Triple {
    double mu, sigma, a, T, dt;
  };
  // horizons sized so P(first crossing after T) is far below one SE
  const Triple triples[3] = {{-1.0, 1.0, 1.0, 30.0, 0.01},
                             {-0.5, 2.0, 3.0, 150.0, 0.02},
                             {-2.0, 1.0, 0.5, 15.0, 0.01}};
  for (const auto& tr : triples) {
    const double exact = bm_drift_max_prob(tr.mu, tr.sigma, tr.a);
    auto est = mc::drifted_bm_max_mc(tr.mu, tr.sigma, tr.a, tr.T, tr.dt, 100000, 808);
    const double dev = std::fabs(est.p_hat - exact) / est.se;
    out.require(dev <= 3.0, "triple within 3 SE");
    out.detail << "(" << tr.mu << "," << tr.sigma << "," << tr.a << "): mc="
               << est.p_hat << " exact=" << exact << " dev=" << dev << "SE  ";
  }
  return out;
}

// --- criterion 9: isospectrality ---------------------------------------------

Outcome criterion_isospectral() {
  Outcome out;
  Grid g = Grid::make(1024, 40.0);
  Field u0 = momentum_gaussian(g, 2.0, 10.0, 1.0);

  // (a) deterministic drift of the top 3 eigenvalues over T = 2
  EvolveOptions opts;
  opts.dt = 1e-4;
  opts.T = 2.0;
  opts.output_stride = 5000;
  Trajectory det = simulate(u0, NoiseBasis{}, opts, CounterRng(0, 0));
  std::vector<double> drift = isospectral_drift(det, 3);
  double worst = 0.0;
  for (double d : drift) worst = std::max(worst, d);
  out.require(worst <= 0.01, "deterministic top-3 eigenvalue drift <= 1%");
  out.detail << "det_drift=" << worst;

  // (b) SCH with one constant mode: pathwise top-eigenvalue drift <= 2%
  NoiseBasis basis;
  basis.modes.push_back(NoiseMode::constant(0.1));
  opts.output_stride = 10000;  // endpoints + midpoint
  double worst_sch = 0.0;
  for (uint64_t path : {0ull, 1ull}) {
    Trajectory t = simulate(u0, basis, opts, CounterRng(909, path));
    std::vector<double> d = isospectral_drift(t, 1);
    for (double x : d) worst_sch = std::max(worst_sch, x);
  }
  out.require(worst_sch <= 0.02, "SCH pathwise top-eigenvalue drift <= 2%");
  out.detail << " sch_drift=" << worst_sch;

  // (c) leading eigenvalues match the emergent peak speeds within 10%
  SpectrumResult spec = ch_spectrum(helmholtz_apply(u0), 2);
  EvolveOptions eopts;
  eopts.dt = 2e-3;
  eopts.T = 24.0;
  eopts.output_stride = 250;
  Trajectory em = simulate(u0, NoiseBasis{}, eopts, CounterRng(0, 0));
  out.require(!em.broken, "emergence run completes");
  EmergentSpeeds sp = emergent_speeds(em, 2);
  for (int k = 0; k < 2; ++k) {
    const double lam = spec.eigenvalues[static_cast<size_t>(k)];
    const double v = sp.speeds[static_cast<size_t>(k)];
    out.require(std::fabs(v / lam - 1.0) <= 0.10,
                "eigenvalue " + std::to_string(k) + " matches speed within 10%");
    out.detail << " lam" << k << "=" << lam << " v" << k << "=" << v;
  }
  return out;
}

// --- criterion 10: scheme validation -----------------------------------------

Outcome criterion_scheme() {
  Outcome out;
  // strong order of the Stratonovich-Heun step on ds = -xi s o dW
  const double sigma = 1.0, s0 = 1.0, T = 1.0;
  const int lev_fine = 12, lev_coarse = 6, n_paths = 256;
  const int n_fine = 1 << lev_fine;
  const double dtf = T / n_fine;
  std::vector<double> errs(static_cast<size_t>(lev_fine - lev_coarse + 1), 0.0);
  for (int path = 0; path < n_paths; ++path) {
    CounterRng rng(1010, static_cast<uint64_t>(path));
    std::vector<double> incr(static_cast<size_t>(n_fine));
    double WT = 0.0;
    for (int k = 0; k < n_fine; ++k) {
      incr[static_cast<size_t>(k)] = rng.normal(static_cast<uint64_t>(k), 0) * std::sqrt(dtf);
      WT += incr[static_cast<size_t>(k)];
    }
    const double exact = s0 * std::exp(-sigma * WT);
    for (int lev = lev_fine; lev >= lev_coarse; --lev) {
      const int nst = 1 << lev;
      const double dt = T / nst;
      double s = s0;
      for (int k = 0; k < nst; ++k) {
        const double dW = incr[static_cast<size_t>(k)];
        s = heun_step(StateVec{s}, dt,
                      [](const StateVec& y) { return StateVec{0.0 * y[0]}; },
                      [&](const StateVec& y) { return StateVec{-sigma * y[0] * dW}; })[0];
      }
      errs[static_cast<size_t>(lev_fine - lev)] += std::fabs(s - exact) / n_paths;
      if (lev > lev_coarse) {
        std::vector<double> half(static_cast<size_t>(nst / 2));
        for (int k = 0; k < nst / 2; ++k)
          half[static_cast<size_t>(k)] =
              incr[static_cast<size_t>(2 * k)] + incr[static_cast<size_t>(2 * k + 1)];
        incr = half;
      }
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = lev_fine - lev_coarse + 1;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(T / (1 << (lev_fine - i)));
    const double y = std::log(errs[static_cast<size_t>(i)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.require(order >= 0.9, "measured strong order >= 0.9");
  out.detail << "strong_order=" << order;

  // zero-noise SCH run is bit-identical to the CH run (through the harness)
  nlohmann::json j;
  j["domain"] = {{"length", 20.0}, {"n", 256}};
  j["time"] = {{"dt", 1e-3}, {"T", 0.2}, {"output_stride", 20}};
  j["initial_condition"] = {{"type", "gaussian"}, {"amplitude", 0.8},
                            {"center", 10.0}, {"width", 1.0}};
  j["noise"] = {{"enabled", false}, {"modes", nlohmann::json::array()}};
  j["seed"] = 99;
  j["paths"] = 1;
  ExperimentConfig cfg = ExperimentConfig::from_json(j);
  RunResult ch = run_ch(cfg, "acceptance_out/c10_ch");
  RunResult sch = run_sch(cfg, "acceptance_out/c10_sch");
  auto hash_of = [](const nlohmann::json& manifest, const std::string& file) {
    for (const auto& o : manifest.at("outputs"))
      if (o.at("file") == file) return std::string(o.at("fnv1a64"));
    return std::string();
  };
  const std::string a = hash_of(ch.manifest, "field_final.csv");
  const std::string b = hash_of(sch.manifest, "field_final_p0000.csv");
  out.require(!a.empty() && a == b, "zero-noise SCH final field == CH final field");
  const std::string da = hash_of(ch.manifest, "diagnostics.csv");
  const std::string db = hash_of(sch.manifest, "diagnostics_p0000.csv");
  out.require(!da.empty() && da == db, "zero-noise SCH diagnostics == CH diagnostics");
  return out;
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<Outcome()> fn;
  };
  const Entry entries[] = {
      {"1 conservation-deterministic-ch", criterion_conservation},
      {"2 peakon-exactness", criterion_peakon_exactness},
      {"3 emergence-phenomenology", criterion_emergence},
      {"4 steepening-lemma-bounds", criterion_steepening},
      {"5 pathwise-stochastic-conservation", criterion_pathwise_conservation},
      {"6 mean-blowup-riccati-bound", criterion_mean_blowup},
      {"7 positive-probability-breaking", criterion_breaking_probability},
      {"8 drifted-bm-maximum-law", criterion_bm_max_law},
      {"9 isospectrality", criterion_isospectral},
      {"10 scheme-validation", criterion_scheme},
  };

  int failures = 0;
  for (const auto& e : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = e.fn();
    } catch (const std::exception& ex) {
      out.pass = false;
      out.detail << "exception: " << ex.what();
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s  %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", e.name,
                out.detail.str().c_str(), wall);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
