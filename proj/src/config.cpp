#include "config.hpp"

#include <cmath>

#include "errors.hpp"
#include "io.hpp"
#include "spectral.hpp"

namespace chlab {

using nlohmann::json;

namespace {

// tolerant typed getters that record failures instead of throwing one by one
template <class T>
T get_or(const json& j, const char* key, T fallback, ValidationCollector& v,
         const std::string& scope) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    v.fail(scope.empty() ? key : scope + "." + key, "wrong type");
    return fallback;
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ValidationCollector v;
  ExperimentConfig c;

  if (j.contains("domain")) {
    const json& d = j["domain"];
    c.domain.length = get_or(d, "length", c.domain.length, v, "domain");
    c.domain.n = get_or(d, "n", c.domain.n, v, "domain");
  }
  if (!(c.domain.length > 0.0) || !std::isfinite(c.domain.length))
    v.fail("domain.length", "must be positive and finite");
  if (c.domain.n < 16 || (c.domain.n & (c.domain.n - 1)) != 0)
    v.fail("domain.n", "must be a power of two, >= 16");

  if (j.contains("time")) {
    const json& t = j["time"];
    c.time.dt = get_or(t, "dt", c.time.dt, v, "time");
    c.time.T = get_or(t, "T", c.time.T, v, "time");
    c.time.output_stride = get_or(t, "output_stride", c.time.output_stride, v, "time");
  }
  if (!(c.time.dt > 0.0)) v.fail("time.dt", "must be positive");
  if (!(c.time.T > 0.0)) v.fail("time.T", "must be positive");
  if (c.time.output_stride < 1) v.fail("time.output_stride", "must be >= 1");

  if (j.contains("initial_condition")) {
    const json& ic = j["initial_condition"];
    const std::string type = get_or<std::string>(ic, "type", "gaussian", v, "initial_condition");
    if (type == "gaussian") {
      GaussianIc g;
      g.amplitude = get_or(ic, "amplitude", 1.0, v, "initial_condition");
      g.center = get_or(ic, "center", 0.5 * c.domain.length, v, "initial_condition");
      g.width = get_or(ic, "width", 1.0, v, "initial_condition");
      g.interpret = get_or<std::string>(ic, "interpret", "velocity", v, "initial_condition");
      if (g.interpret != "velocity" && g.interpret != "momentum")
        v.fail("initial_condition.interpret", "must be 'velocity' or 'momentum'");
      if (!(g.width > 0.0)) v.fail("initial_condition.width", "must be positive");
      c.initial_condition = g;
    } else if (type == "peakons") {
      PeakonListIc pl;
      if (ic.contains("peakons") && ic["peakons"].is_array()) {
        for (const auto& e : ic["peakons"]) {
          pl.p.push_back(get_or(e, "p", 0.0, v, "initial_condition.peakons[]"));
          pl.q.push_back(get_or(e, "q", 0.0, v, "initial_condition.peakons[]"));
        }
      }
      if (pl.p.empty()) v.fail("initial_condition.peakons", "must list at least one {p, q}");
      c.initial_condition = pl;
    } else if (type == "antisymmetric") {
      AntisymmetricIc a;
      a.amplitude = get_or(ic, "amplitude", 1.0, v, "initial_condition");
      a.width = get_or(ic, "width", 1.0, v, "initial_condition");
      if (!(a.width > 0.0)) v.fail("initial_condition.width", "must be positive");
      c.initial_condition = a;
    } else if (type == "sampled_file") {
      SampledFileIc s;
      s.path = get_or<std::string>(ic, "path", "", v, "initial_condition");
      if (s.path.empty()) v.fail("initial_condition.path", "must name a field csv");
      c.initial_condition = s;
    } else {
      v.fail("initial_condition.type",
             "unknown type '" + type +
                 "' (gaussian | peakons | antisymmetric | sampled_file)");
    }
  }

  if (j.contains("noise")) {
    const json& nz = j["noise"];
    c.noise.enabled = get_or(nz, "enabled", false, v, "noise");
    if (nz.contains("modes") && nz["modes"].is_array()) {
      int idx = 0;
      for (const auto& m : nz["modes"]) {
        const std::string scope = "noise.modes[" + std::to_string(idx++) + "]";
        NoiseModeConfig mc;
        mc.type = get_or<std::string>(m, "type", "constant", v, scope);
        if (mc.type == "constant") {
          mc.c = get_or(m, "c", 0.0, v, scope);
        } else if (mc.type == "exponential") {
          mc.C = get_or(m, "C", 0.0, v, scope);
          mc.A = get_or(m, "A", 0.0, v, scope);
          mc.B = get_or(m, "B", 0.0, v, scope);
        } else if (mc.type == "sampled_file") {
          mc.path = get_or<std::string>(m, "path", "", v, scope);
          if (mc.path.empty()) v.fail(scope + ".path", "must name a field csv");
        } else {
          v.fail(scope + ".type", "unknown type '" + mc.type + "'");
        }
        c.noise.modes.push_back(mc);
      }
    }
    if (c.noise.enabled && c.noise.modes.empty())
      v.fail("noise.modes", "noise enabled but no modes given");
  }

  if (j.contains("tracking")) {
    const json& t = j["tracking"];
    c.tracking.enabled = get_or(t, "enabled", false, v, "tracking");
    c.tracking.blowup_threshold =
        get_or(t, "blowup_threshold", c.tracking.blowup_threshold, v, "tracking");
    c.tracking.slope_threshold =
        get_or(t, "slope_threshold", c.tracking.slope_threshold, v, "tracking");
    if (t.contains("envelope_m"))
      c.tracking.envelope_m = get_or(t, "envelope_m", 0.0, v, "tracking");
    if (!(c.tracking.blowup_threshold > 0.0))
      v.fail("tracking.blowup_threshold", "must be positive");
    if (!(c.tracking.slope_threshold < 0.0))
      v.fail("tracking.slope_threshold", "must be negative");
  }

  if (j.contains("mc")) {
    const json& m = j["mc"];
    c.mc.n_paths = get_or(m, "n_paths", c.mc.n_paths, v, "mc");
    c.mc.eps = get_or(m, "eps", c.mc.eps, v, "mc");
    c.mc.s0 = get_or(m, "s0", c.mc.s0, v, "mc");
    c.mc.M = get_or(m, "M", c.mc.M, v, "mc");
    if (m.contains("xi_norm")) c.mc.xi_norm = get_or(m, "xi_norm", 0.0, v, "mc");
    c.mc.process = get_or<std::string>(m, "process", c.mc.process, v, "mc");
    if (c.mc.n_paths < 100) v.fail("mc.n_paths", "must be >= 100");
    if (!(c.mc.eps > 0.0 && c.mc.eps < 1.0 / 3.0)) v.fail("mc.eps", "must lie in (0, 1/3)");
    if (!(c.mc.s0 < 0.0)) v.fail("mc.s0", "must be negative");
    if (!(c.mc.M >= 0.0)) v.fail("mc.M", "must be >= 0");
    if (c.mc.process != "envelope" && c.mc.process != "comparison")
      v.fail("mc.process", "must be 'envelope' or 'comparison'");
  }

  if (j.contains("spectrum")) {
    const json& s = j["spectrum"];
    c.spectrum.k_max = get_or(s, "k_max", c.spectrum.k_max, v, "spectrum");
    c.spectrum.n_peaks = get_or(s, "n_peaks", c.spectrum.n_peaks, v, "spectrum");
    c.spectrum.drift = get_or(s, "drift", c.spectrum.drift, v, "spectrum");
    if (c.spectrum.k_max < 1) v.fail("spectrum.k_max", "must be >= 1");
    if (c.spectrum.n_peaks < 1) v.fail("spectrum.n_peaks", "must be >= 1");
  }

  c.seed = get_or<uint64_t>(j, "seed", 0, v, "");
  c.paths = get_or(j, "paths", 1, v, "");
  if (c.paths < 1) v.fail("paths", "must be >= 1");

  v.raise_if_failed();
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Validation, std::string("config parse error: ") + e.what());
  }
  return from_json(j);
}

json ExperimentConfig::to_json() const {
  json j;
  j["domain"] = {{"length", domain.length}, {"n", domain.n}};
  j["time"] = {{"dt", time.dt}, {"T", time.T}, {"output_stride", time.output_stride}};
  if (const auto* g = std::get_if<GaussianIc>(&initial_condition)) {
    j["initial_condition"] = {{"type", "gaussian"},
                              {"amplitude", g->amplitude},
                              {"center", g->center},
                              {"width", g->width},
                              {"interpret", g->interpret}};
  } else if (const auto* pl = std::get_if<PeakonListIc>(&initial_condition)) {
    json arr = json::array();
    for (size_t i = 0; i < pl->p.size(); ++i)
      arr.push_back({{"p", pl->p[i]}, {"q", pl->q[i]}});
    j["initial_condition"] = {{"type", "peakons"}, {"peakons", arr}};
  } else if (const auto* a = std::get_if<AntisymmetricIc>(&initial_condition)) {
    j["initial_condition"] = {
        {"type", "antisymmetric"}, {"amplitude", a->amplitude}, {"width", a->width}};
  } else if (const auto* s = std::get_if<SampledFileIc>(&initial_condition)) {
    j["initial_condition"] = {{"type", "sampled_file"}, {"path", s->path}};
  }
  json modes = json::array();
  for (const auto& m : noise.modes) {
    if (m.type == "constant")
      modes.push_back({{"type", "constant"}, {"c", m.c}});
    else if (m.type == "exponential")
      modes.push_back({{"type", "exponential"}, {"C", m.C}, {"A", m.A}, {"B", m.B}});
    else
      modes.push_back({{"type", "sampled_file"}, {"path", m.path}});
  }
  j["noise"] = {{"enabled", noise.enabled}, {"modes", modes}};
  j["tracking"] = {{"enabled", tracking.enabled},
                   {"blowup_threshold", tracking.blowup_threshold},
                   {"slope_threshold", tracking.slope_threshold}};
  if (tracking.envelope_m) j["tracking"]["envelope_m"] = *tracking.envelope_m;
  j["mc"] = {{"n_paths", mc.n_paths}, {"eps", mc.eps},       {"s0", mc.s0},
             {"M", mc.M},             {"process", mc.process}};
  if (mc.xi_norm) j["mc"]["xi_norm"] = *mc.xi_norm;
  j["spectrum"] = {{"k_max", spectrum.k_max},
                   {"n_peaks", spectrum.n_peaks},
                   {"drift", spectrum.drift}};
  j["seed"] = seed;
  j["paths"] = paths;
  return j;
}

Grid ExperimentConfig::make_grid() const { return Grid::make(domain.n, domain.length); }

Field ExperimentConfig::build_initial_field() const {
  const Grid g = make_grid();
  if (const auto* gc = std::get_if<GaussianIc>(&initial_condition)) {
    auto gauss = [&](double x) {
      const double y = g.periodic_delta(x, gc->center);
      return gc->amplitude * std::exp(-y * y / (2.0 * gc->width * gc->width));
    };
    Field f = make_field(g, gauss);
    if (gc->interpret == "momentum") return helmholtz_invert(f);
    return f;
  }
  if (const auto* pl = std::get_if<PeakonListIc>(&initial_condition)) {
    // discrete momentum deltas -> exact discrete peakons via K*
    Field m(g);
    for (size_t i = 0; i < pl->p.size(); ++i) {
      double pos = std::fmod(pl->q[i], g.length);
      if (pos < 0.0) pos += g.length;
      int node = static_cast<int>(std::llround(pos / g.dx())) % g.n;
      m[node] += pl->p[i] / g.dx();
    }
    return helmholtz_invert(m);
  }
  if (const auto* a = std::get_if<AntisymmetricIc>(&initial_condition)) {
    const double x0 = 0.5 * g.length;
    return make_field(g, [&](double x) {
      const double y = g.periodic_delta(x, x0);
      return -a->amplitude * (y / a->width) * std::exp(-y * y / (2.0 * a->width * a->width));
    });
  }
  const auto& s = std::get<SampledFileIc>(initial_condition);
  Field f = field_from_csv(s.path);
  require(f.grid == g, ErrorKind::Validation,
          "initial_condition.path: sampled field grid does not match domain");
  return f;
}

PeakonState ExperimentConfig::build_peakon_state() const {
  const auto* pl = std::get_if<PeakonListIc>(&initial_condition);
  require(pl != nullptr, ErrorKind::Validation,
          "initial_condition.type: peakon runs require type 'peakons'");
  PeakonState s;
  s.p = pl->p;
  s.q = pl->q;
  s.validate();
  return s;
}

NoiseBasis ExperimentConfig::build_noise_basis(const Grid& g) const {
  NoiseBasis basis;
  if (!noise.enabled) return basis;
  for (size_t i = 0; i < noise.modes.size(); ++i) {
    const auto& m = noise.modes[i];
    if (m.type == "constant") {
      basis.modes.push_back(NoiseMode::constant(m.c));
    } else if (m.type == "exponential") {
      throw Error(ErrorKind::Validation,
                  "noise.modes[" + std::to_string(i) +
                      "]: exponential modes are inconsistent with the periodic "
                      "domain; they are admitted for peakon runs and operator "
                      "diagnostics only");
    } else {
      Field xi = field_from_csv(m.path);
      require(xi.grid == g, ErrorKind::Validation,
              "noise.modes[" + std::to_string(i) + "].path: grid mismatch");
      basis.modes.push_back(NoiseMode::sampled(xi));
    }
  }
  return basis;
}

NoiseBasis ExperimentConfig::build_line_noise_basis() const {
  NoiseBasis basis;
  if (!noise.enabled) return basis;
  for (const auto& m : noise.modes) {
    if (m.type == "constant")
      basis.modes.push_back(NoiseMode::constant(m.c));
    else if (m.type == "exponential")
      basis.modes.push_back(NoiseMode::exponential(m.C, m.A, m.B));
    else
      basis.modes.push_back(NoiseMode::sampled(field_from_csv(m.path)));
  }
  return basis;
}

double ExperimentConfig::slope_xi_norm() const {
  if (mc.xi_norm) return *mc.xi_norm;
  double s = 0.0;
  bool any = false;
  for (const auto& m : noise.modes) {
    if (m.type == "constant") {
      s += m.c * m.c;
      any = true;
    }
  }
  return any && noise.enabled ? std::sqrt(s) : 0.0;
}

}  // namespace chlab
