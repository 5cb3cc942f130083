#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>

#include "ch_pde.hpp"
#include "errors.hpp"
#include "functionals.hpp"
#include "io.hpp"
#include "isospectral.hpp"
#include "parallel.hpp"
#include "slope_sde.hpp"
#include "spectral.hpp"
#include "steepening.hpp"
#include "version.hpp"

namespace chlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// collects files + fingerprints and finishes with the manifest
class Bundle {
 public:
  Bundle(const ExperimentConfig& cfg, std::string verb, std::string out_dir)
      : cfg_(cfg), verb_(std::move(verb)), dir_(std::move(out_dir)),
        t0_(std::chrono::steady_clock::now()) {
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) { return (fs::path(dir_) / name).string(); }

  void add(const std::string& name) {
    outputs_.push_back({{"file", name}, {"fnv1a64", file_fingerprint(path(name))}});
  }

  void add_json(const std::string& name, const json& j) {
    write_text_file(path(name), j.dump(2) + "\n");
    add(name);
  }

  void note(const std::string& key, const json& value) { notes_[key] = value; }

  RunResult finish(const json& schema) {
    add_json("schema.json", schema);
    json manifest;
    manifest["tool"] = "chlab";
    manifest["version"] = kVersion;
    manifest["verb"] = verb_;
    manifest["config"] = cfg_.to_json();
    manifest["seed"] = cfg_.seed;
    manifest["outputs"] = outputs_;
    if (!notes_.empty()) manifest["summary"] = notes_;
    // fingerprint over everything except volatile fields
    manifest["fingerprint"] = fnv1a64_hex(manifest.dump());
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    manifest["wall_time_s"] = wall;
    write_text_file(path("manifest.json"), manifest.dump(2) + "\n");
    return RunResult{dir_, manifest, manifest["fingerprint"]};
  }

 private:
  const ExperimentConfig& cfg_;
  std::string verb_;
  std::string dir_;
  json outputs_ = json::array();
  json notes_;
  std::chrono::steady_clock::time_point t0_;
};

json diagnostics_schema() {
  return {{"columns", {"t", "h", "norm12", "momentum", "sup_u", "sup_ux", "broken"}},
          {"notes", "broken is 0 until the blow-up flag time, then 1"}};
}

json slope_schema() {
  return {{"columns", {"t", "nu", "s", "u_at_nu", "kconv_at_nu", "envelope"}},
          {"notes", "envelope is NaN when the coth hypothesis does not hold"}};
}

void write_diagnostics_csv(const std::string& path, const Trajectory& traj) {
  CsvWriter w(path, {"t", "h", "norm12", "momentum", "sup_u", "sup_ux", "broken"});
  for (const auto& d : traj.diagnostics) {
    const double broken =
        traj.broken && d.t >= traj.break_time - 1e-15 ? 1.0 : 0.0;
    w.row({d.t, d.h, d.norm12, d.momentum, d.sup_u, d.sup_ux, broken});
  }
}

void write_slope_csv(const std::string& path, const std::vector<SlopeRecord>& recs) {
  CsvWriter w(path, {"t", "nu", "s", "u_at_nu", "kconv_at_nu", "envelope"});
  for (const auto& r : recs) w.row({r.t, r.nu, r.s, r.u_at_nu, r.kconv_at_nu, r.envelope});
}

void write_two_column(const std::string& path, const std::string& xcol,
                      const std::string& ycol, const std::vector<double>& xs,
                      const std::vector<double>& ys) {
  CsvWriter w(path, {xcol, ycol});
  for (size_t i = 0; i < xs.size(); ++i) w.row({xs[i], ys[i]});
}

Trajectory evolve_one_path(const ExperimentConfig& cfg, uint64_t path_index) {
  const Field u0 = cfg.build_initial_field();
  const NoiseBasis noise = cfg.build_noise_basis(u0.grid);
  EvolveOptions opts;
  opts.dt = cfg.time.dt;
  opts.T = cfg.time.T;
  opts.output_stride = cfg.time.output_stride;
  opts.blowup_threshold = cfg.tracking.blowup_threshold;
  opts.track_slope = cfg.tracking.enabled;
  CounterRng rng(cfg.seed, path_index);
  return simulate(u0, noise, opts, rng);
}

json path_summary(const Trajectory& traj) {
  json s;
  s["broken"] = traj.broken;
  s["break_time"] = traj.broken ? json(traj.break_time) : json();
  s["break_reason"] = traj.break_reason;
  s["tracking_lost"] = traj.tracking_lost;
  s["final_time"] = traj.diagnostics.back().t;
  s["final_h"] = traj.diagnostics.back().h;
  s["final_norm12"] = traj.diagnostics.back().norm12;
  return s;
}

void emit_pde_bundle(Bundle& b, const ExperimentConfig& cfg, const Trajectory& traj,
                     const std::string& suffix) {
  write_diagnostics_csv(b.path("diagnostics" + suffix + ".csv"), traj);
  b.add("diagnostics" + suffix + ".csv");
  field_to_csv(traj.snapshots.front(), b.path("field_initial" + suffix + ".csv"));
  b.add("field_initial" + suffix + ".csv");
  field_to_csv(traj.snapshots.back(), b.path("field_final" + suffix + ".csv"));
  b.add("field_final" + suffix + ".csv");
  field_to_binary(traj.snapshots.back(), b.path("field_final" + suffix + ".f64"));
  b.add("field_final" + suffix + ".f64");
  if (!traj.increments.empty()) {
    std::vector<double> flat;
    flat.reserve(traj.increments.size() * traj.increments.front().size());
    for (const auto& row : traj.increments)
      flat.insert(flat.end(), row.begin(), row.end());
    doubles_to_binary(flat, b.path("increments" + suffix + ".f64"));
    b.add("increments" + suffix + ".f64");
  }
  if (cfg.tracking.enabled) {
    auto recs = traj.slope;
    if (!recs.empty()) {
      double M = cfg.tracking.envelope_m
                     ? *cfg.tracking.envelope_m
                     : steepening_constant(traj.snapshots.front());
      attach_envelope(recs, M);
    }
    write_slope_csv(b.path("slope" + suffix + ".csv"), recs);
    b.add("slope" + suffix + ".csv");
  }
  // emergent-peak census per stored snapshot
  {
    CsvWriter w(b.path("peaks" + suffix + ".csv"),
                {"t", "count", "tallest_x", "tallest_height"});
    std::vector<double> ts, counts;
    for (size_t k = 0; k < traj.snapshots.size(); ++k) {
      std::vector<Peak> pk =
          find_peaks(traj.snapshots[k], 0.08, 5.0 * traj.grid.dx());
      w.row({traj.times[k], static_cast<double>(pk.size()),
             pk.empty() ? 0.0 : pk.front().x, pk.empty() ? 0.0 : pk.front().height});
      ts.push_back(traj.times[k]);
      counts.push_back(static_cast<double>(pk.size()));
    }
    w.close();
    b.add("peaks" + suffix + ".csv");
    write_two_column(b.path("plot_peak_count_vs_t" + suffix + ".csv"), "t", "count",
                     ts, counts);
    b.add("plot_peak_count_vs_t" + suffix + ".csv");
  }
  // plot data: two-column extracts
  std::vector<double> ts, hs, sux;
  for (const auto& d : traj.diagnostics) {
    ts.push_back(d.t);
    hs.push_back(d.h);
    sux.push_back(d.sup_ux);
  }
  write_two_column(b.path("plot_h_vs_t" + suffix + ".csv"), "t", "h", ts, hs);
  b.add("plot_h_vs_t" + suffix + ".csv");
  write_two_column(b.path("plot_supux_vs_t" + suffix + ".csv"), "t", "sup_ux", ts, sux);
  b.add("plot_supux_vs_t" + suffix + ".csv");
}

json pde_schema() {
  json s;
  s["diagnostics*.csv"] = diagnostics_schema();
  s["slope*.csv"] = slope_schema();
  s["peaks*.csv"] = {{"columns", {"t", "count", "tallest_x", "tallest_height"}},
                     {"notes", "separated maxima (spacing >= 5 dx, height >= "
                               "0.08 of the tallest)"}};
  s["field_*.csv"] = {{"columns", {"x", "value"}}};
  s["field_*.f64"] = {{"format", "raw little-endian float64 samples, grid per manifest config"}};
  s["increments*.f64"] = {{"format", "raw little-endian float64, row-major [step][mode]"}};
  s["plot_*.csv"] = {{"format", "two columns, plot-ready"}};
  return s;
}

}  // namespace

RunResult run_ch(const ExperimentConfig& cfg, const std::string& out_dir) {
  ExperimentConfig det = cfg;
  det.noise.enabled = false;
  det.noise.modes.clear();
  Bundle b(cfg, "simulate-ch", out_dir);
  Trajectory traj = evolve_one_path(det, 0);
  emit_pde_bundle(b, det, traj, "");
  b.note("path", path_summary(traj));
  return b.finish(pde_schema());
}

RunResult run_sch(const ExperimentConfig& cfg, const std::string& out_dir) {
  Bundle b(cfg, "simulate-sch", out_dir);
  const int n_paths = cfg.paths;
  std::vector<Trajectory> trajs(static_cast<size_t>(n_paths));
  parallel_for(n_paths, [&](int i) {
    trajs[static_cast<size_t>(i)] = evolve_one_path(cfg, static_cast<uint64_t>(i));
  });
  json paths = json::array();
  for (int i = 0; i < n_paths; ++i) {
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "_p%04d", i);
    emit_pde_bundle(b, cfg, trajs[static_cast<size_t>(i)], suffix);
    json s = path_summary(trajs[static_cast<size_t>(i)]);
    s["path_index"] = i;
    paths.push_back(s);
  }
  b.note("paths", paths);
  return b.finish(pde_schema());
}

RunResult run_peakons(const ExperimentConfig& cfg, const std::string& out_dir) {
  Bundle b(cfg, "peakons", out_dir);
  const PeakonState s0 = cfg.build_peakon_state();
  const NoiseBasis noise = cfg.build_line_noise_basis();
  PeakonEvolveOptions opts;
  opts.dt = cfg.time.dt;
  opts.T = cfg.time.T;
  opts.output_stride = cfg.time.output_stride;
  CounterRng rng(cfg.seed, 0);
  PeakonTrajectory traj = simulate_peakons(s0, noise, opts, rng);

  const int m = s0.count();
  std::vector<std::string> cols = {"t"};
  for (int a = 1; a <= m; ++a) cols.push_back("q" + std::to_string(a));
  for (int a = 1; a <= m; ++a) cols.push_back("p" + std::to_string(a));
  {
    CsvWriter w(b.path("peakons.csv"), cols);
    for (size_t i = 0; i < traj.times.size(); ++i) {
      std::vector<double> row = {traj.times[i]};
      row.insert(row.end(), traj.states[i].q.begin(), traj.states[i].q.end());
      row.insert(row.end(), traj.states[i].p.begin(), traj.states[i].p.end());
      w.row(row);
    }
  }
  b.add("peakons.csv");
  {
    CsvWriter w(b.path("peakon_diagnostics.csv"), {"t", "h", "total_momentum"});
    for (size_t i = 0; i < traj.times.size(); ++i)
      w.row({traj.times[i], traj.hamiltonian[i], traj.total_momentum[i]});
  }
  b.add("peakon_diagnostics.csv");
  write_two_column(b.path("plot_h_vs_t.csv"), "t", "h", traj.times, traj.hamiltonian);
  b.add("plot_h_vs_t.csv");

  json schema;
  schema["peakons.csv"] = {{"columns", "t, q1..qM, p1..pM"}};
  schema["peakon_diagnostics.csv"] = {{"columns", {"t", "h", "total_momentum"}}};
  schema["plot_*.csv"] = {{"format", "two columns, plot-ready"}};
  json summary;
  summary["h_drift"] =
      std::fabs(traj.hamiltonian.back() / traj.hamiltonian.front() - 1.0);
  b.note("peakons", summary);
  return b.finish(schema);
}

RunResult run_slope_mc(const ExperimentConfig& cfg, const std::string& out_dir) {
  Bundle b(cfg, "slope-mc", out_dir);
  SlopeSdeParams p;
  p.s0 = cfg.mc.s0;
  p.M = cfg.mc.M;
  p.xi_norm = cfg.slope_xi_norm();
  p.eps = cfg.mc.eps;
  p.dt = cfg.time.dt;
  p.T = cfg.time.T;
  p.threshold = cfg.tracking.slope_threshold;
  const McProcess proc =
      cfg.mc.process == "comparison" ? McProcess::Comparison : McProcess::Envelope;
  EnsembleSummary es = mc_breaking_probability(p, cfg.mc.n_paths, cfg.seed, proc);

  {
    CsvWriter w(b.path("paths.csv"), {"path_index", "broken", "breaking_time"});
    for (const auto& o : es.outcomes)
      w.row({static_cast<double>(o.path_index), o.broken ? 1.0 : 0.0, o.breaking_time});
  }
  b.add("paths.csv");
  {
    CsvWriter w(b.path("mean_slope.csv"), {"t", "mean", "se"});
    for (const auto& msp : es.mean_slope) w.row({msp.t, msp.mean, msp.se});
  }
  b.add("mean_slope.csv");
  {
    std::vector<double> ts, ms;
    for (const auto& msp : es.mean_slope) {
      ts.push_back(msp.t);
      ms.push_back(msp.mean);
    }
    write_two_column(b.path("plot_mean_s_vs_t.csv"), "t", "mean_s", ts, ms);
  }
  b.add("plot_mean_s_vs_t.csv");

  json ensemble;
  ensemble["n_paths"] = es.n_paths;
  ensemble["n_broken"] = es.n_broken;
  ensemble["p_hat"] = es.p_hat;
  ensemble["wilson_95"] = {es.wilson_low, es.wilson_high};
  ensemble["master_seed"] = es.master_seed;
  ensemble["process"] = cfg.mc.process;
  ensemble["params"] = {{"s0", p.s0},   {"M", p.M}, {"xi_norm", p.xi_norm},
                        {"eps", p.eps}, {"dt", p.dt}, {"T", p.T},
                        {"threshold", p.threshold}};
  ensemble["config"] = cfg.to_json();
  b.add_json("ensemble.json", ensemble);
  b.note("p_hat", es.p_hat);

  json schema;
  schema["paths.csv"] = {{"columns", {"path_index", "broken", "breaking_time"}},
                         {"notes", "breaking_time is NaN for unbroken paths"}};
  schema["mean_slope.csv"] = {
      {"columns", {"t", "mean", "se"}},
      {"notes", "overflowed paths are frozen at their last value"}};
  schema["ensemble.json"] = {{"format", "EnsembleSummary with config echo"}};
  return b.finish(schema);
}

RunResult run_spectrum(const ExperimentConfig& cfg, const std::string& out_dir) {
  Bundle b(cfg, "spectrum", out_dir);
  ExperimentConfig run_cfg = cfg;
  run_cfg.tracking.enabled = false;
  Trajectory traj = evolve_one_path(run_cfg, 0);

  Field m0 = helmholtz_apply(traj.snapshots.front());
  SpectrumResult spec0 = ch_spectrum(m0, cfg.spectrum.k_max);
  json sj;
  sj["eigenvalues"] = spec0.eigenvalues;
  sj["eigenvalues_imag"] = spec0.eigenvalues_imag;
  sj["n_grid"] = spec0.n_grid;
  sj["indefinite_weight"] = spec0.indefinite_weight;
  sj["min_m"] = spec0.min_m;
  sj["max_m"] = spec0.max_m;
  b.add_json("spectrum.json", sj);

  if (cfg.spectrum.drift) {
    std::vector<double> drift = isospectral_drift(traj, cfg.spectrum.k_max);
    write_two_column(b.path("eigen_drift.csv"), "t", "max_rel_drift", traj.times, drift);
    b.add("eigen_drift.csv");
    b.note("max_drift", *std::max_element(drift.begin(), drift.end()));
  }

  json speeds_note;
  try {
    EmergentSpeeds sp = emergent_speeds(traj, cfg.spectrum.n_peaks);
    CsvWriter w(b.path("speeds.csv"), {"rank", "eigenvalue", "speed", "height"});
    for (int i = 0; i < cfg.spectrum.n_peaks; ++i)
      w.row({static_cast<double>(i), spec0.eigenvalues[static_cast<size_t>(i)],
             sp.speeds[static_cast<size_t>(i)], sp.heights[static_cast<size_t>(i)]});
    w.close();
    b.add("speeds.csv");
    speeds_note["measured"] = true;
  } catch (const Error& e) {
    speeds_note["measured"] = false;
    speeds_note["reason"] = e.what();
  }
  b.note("speeds", speeds_note);

  json schema;
  schema["spectrum.json"] = {{"format", "SpectrumResult of the initial momentum"}};
  schema["eigen_drift.csv"] = {{"columns", {"t", "max_rel_drift"}}};
  schema["speeds.csv"] = {{"columns", {"rank", "eigenvalue", "speed", "height"}}};
  return b.finish(schema);
}

RunResult run_verb(const ExperimentConfig& cfg, const std::string& verb,
                   const std::string& out_dir) {
  if (verb == "simulate-ch") return run_ch(cfg, out_dir);
  if (verb == "simulate-sch") return run_sch(cfg, out_dir);
  if (verb == "peakons") return run_peakons(cfg, out_dir);
  if (verb == "slope-mc") return run_slope_mc(cfg, out_dir);
  if (verb == "spectrum") return run_spectrum(cfg, out_dir);
  throw Error(ErrorKind::InvalidArgument,
              "unknown verb '" + verb +
                  "' (simulate-ch | simulate-sch | peakons | slope-mc | spectrum)");
}

}  // namespace chlab
