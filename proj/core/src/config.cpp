#include "rovib/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rovib/errors.hpp"

namespace rovib {

using nlohmann::json;

namespace {

/// Reads the members of one JSON object and reports unknown keys at the end.
class ObjectReader {
public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + "must be an object");
  }

  bool has(const char* key) const { return obj_.contains(key); }

  void number(const char* key, double& out) {
    if (const json* v = take(key)) out = as_number(*v, key);
  }

  void nullable_number(const char* key, std::optional<double>& out) {
    if (const json* v = take(key)) out = v->is_null() ? std::nullopt : std::optional<double>(as_number(*v, key));
  }

  void integer(const char* key, int& out, int lo) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) throw ConfigError(field(key) + " must be an integer");
      const auto x = v->get<long long>();
      if (x < lo || x > 1000000) throw ConfigError(field(key) + " must be >= " + std::to_string(lo));
      out = static_cast<int>(x);
    }
  }

  void size(const char* key, std::size_t& out) {
    int x = static_cast<int>(out);
    integer(key, x, 2);
    out = static_cast<std::size_t>(x);
  }

  void boolean(const char* key, bool& out) {
    if (const json* v = take(key)) {
      if (!v->is_boolean()) throw ConfigError(field(key) + " must be true or false");
      out = v->get<bool>();
    }
  }

  void string(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) throw ConfigError(field(key) + " must be a string");
      out = v->get<std::string>();
    }
  }

  void nullable_string(const char* key, std::optional<std::string>& out) {
    if (const json* v = take(key)) {
      if (v->is_null()) {
        out.reset();
      } else if (v->is_string()) {
        out = v->get<std::string>();
      } else {
        throw ConfigError(field(key) + " must be a string or null");
      }
    }
  }

  const json* object(const char* key) { return take(key); }
  std::string child(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string field(const char* key) const { return "config field '" + child(key) + "'"; }

  void finish() const {
    for (const auto& [k, v] : obj_.items()) {
      if (!seen_.contains(k)) throw ConfigError("unknown config field '" + child(k.c_str()) + "'");
    }
  }

private:
  const json* take(const char* key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  double as_number(const json& v, const char* key) const {
    if (!v.is_number()) throw ConfigError(field(key) + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(field(key) + " must be finite");
    return x;
  }

  std::string where() const { return path_.empty() ? "config " : "config field '" + path_ + "' "; }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_pulse(ObjectReader& parent, const char* key, Pulse& p) {
  const json* v = parent.object(key);
  if (!v) return;
  ObjectReader r(*v, parent.child(key));
  r.number("center_cm1", p.center_cm1);
  r.number("fwhm_fs", p.fwhm_fs);
  r.number("chirp_fs2", p.chirp_fs2);
  r.number("delay_fs", p.delay_fs);
  r.number("amplitude", p.amplitude);
  r.finish();
}

void read_ratio(ObjectReader& parent, RunConfig& c) {
  const json* v = parent.object("branch_ratio");
  if (!v) return;
  ObjectReader r(*v, "branch_ratio");
  std::string source = "computed";
  r.string("source", source);
  if (source == "computed") {
    c.ratio_source = RatioSource::Computed;
    if (r.has("value")) throw ConfigError("config field 'branch_ratio.value' is only allowed with source \"fixed\"");
    r.number("a_perp_prime", c.polarizability.a_perp_prime);
    r.number("delta_a_prime", c.polarizability.delta_a_prime);
    r.number("re", c.polarizability.re);
  } else if (source == "fixed") {
    c.ratio_source = RatioSource::Fixed;
    if (!r.has("value")) throw ConfigError("config field 'branch_ratio.value' is required with source \"fixed\"");
    r.number("value", c.fixed_ratio);
  } else if (source == "q_only") {
    c.ratio_source = RatioSource::QOnly;
  } else {
    throw ConfigError("config field 'branch_ratio.source' must be \"computed\", \"fixed\" or \"q_only\"");
  }
  r.finish();
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  ObjectReader r(doc, "");
  r.nullable_string("constants_db", c.constants_db);
  r.string("state", c.state);
  r.nullable_number("gamma_e", c.gamma_e);
  r.nullable_number("beta_e", c.beta_e);
  r.integer("v1", c.v1, 1);
  r.number("temperature_k", c.temperature_k);
  if (const json* v = r.object("spin_weights")) {
    ObjectReader s(*v, "spin_weights");
    s.number("even", c.spin.even);
    s.number("odd", c.spin.odd);
    s.finish();
  }
  read_pulse(r, "pump", c.pump);
  read_pulse(r, "stokes", c.stokes);
  r.boolean("center_on_q", c.center_on_q);
  read_ratio(r, c);
  r.nullable_number("tau_c_ps", c.tau_c_ps);
  if (const json* v = r.object("grid")) {
    ObjectReader g(*v, "grid");
    g.number("t0_ps", c.grid.t0_ps);
    g.number("t1_ps", c.grid.t1_ps);
    g.number("dt_ps", c.grid.dt_ps);
    g.nullable_number("probe_fwhm_fs", c.grid.probe_fwhm_fs);
    g.finish();
  }
  if (const json* v = r.object("spectrum")) {
    ObjectReader s(*v, "spectrum");
    s.number("lo_cm1", c.spectrum.lo_cm1);
    s.number("hi_cm1", c.spectrum.hi_cm1);
    s.number("step_cm1", c.spectrum.step_cm1);
    s.finish();
  }
  if (const json* v = r.object("husimi")) {
    ObjectReader h(*v, "husimi");
    h.string("target", c.husimi.target);
    h.size("n_time", c.husimi.n_time);
    h.size("n_freq", c.husimi.n_freq);
    h.nullable_number("window_fwhm_fs", c.husimi.window_fwhm_fs);
    h.finish();
  }
  if (const json* v = r.object("revivals")) {
    ObjectReader a(*v, "revivals");
    a.number("smooth_fwhm_ps", c.extrema.smooth_fwhm_ps);
    a.number("min_prominence", c.extrema.min_prominence);
    a.number("center_level", c.extrema.center_level);
    a.integer("q_max", c.q_max, 1);
    a.number("tolerance_ps", c.match_tolerance_ps);
    a.finish();
  }
  r.string("output_dir", c.output_dir);
  r.finish();
  validate(c);
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string run_config_json(const RunConfig& c) {
  auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
  auto pulse = [](const Pulse& p) {
    nlohmann::ordered_json j;
    j["center_cm1"] = p.center_cm1;
    j["fwhm_fs"] = p.fwhm_fs;
    j["chirp_fs2"] = p.chirp_fs2;
    j["delay_fs"] = p.delay_fs;
    j["amplitude"] = p.amplitude;
    return j;
  };
  nlohmann::ordered_json j;
  j["constants_db"] = c.constants_db ? json(*c.constants_db) : json(nullptr);
  j["state"] = c.state;
  j["gamma_e"] = opt(c.gamma_e);
  j["beta_e"] = opt(c.beta_e);
  j["v1"] = c.v1;
  j["temperature_k"] = c.temperature_k;
  j["spin_weights"] = {{"even", c.spin.even}, {"odd", c.spin.odd}};
  j["pump"] = pulse(c.pump);
  j["stokes"] = pulse(c.stokes);
  j["center_on_q"] = c.center_on_q;
  nlohmann::ordered_json ratio;
  switch (c.ratio_source) {
    case RatioSource::Computed:
      ratio["source"] = "computed";
      ratio["a_perp_prime"] = c.polarizability.a_perp_prime;
      ratio["delta_a_prime"] = c.polarizability.delta_a_prime;
      ratio["re"] = c.polarizability.re;
      break;
    case RatioSource::Fixed:
      ratio["source"] = "fixed";
      ratio["value"] = c.fixed_ratio;
      break;
    case RatioSource::QOnly:
      ratio["source"] = "q_only";
      break;
  }
  j["branch_ratio"] = ratio;
  j["tau_c_ps"] = opt(c.tau_c_ps);
  nlohmann::ordered_json grid;
  grid["t0_ps"] = c.grid.t0_ps;
  grid["t1_ps"] = c.grid.t1_ps;
  grid["dt_ps"] = c.grid.dt_ps;
  grid["probe_fwhm_fs"] = opt(c.grid.probe_fwhm_fs);
  j["grid"] = grid;
  nlohmann::ordered_json spec;
  spec["lo_cm1"] = c.spectrum.lo_cm1;
  spec["hi_cm1"] = c.spectrum.hi_cm1;
  spec["step_cm1"] = c.spectrum.step_cm1;
  j["spectrum"] = spec;
  nlohmann::ordered_json hus;
  hus["target"] = c.husimi.target;
  hus["n_time"] = c.husimi.n_time;
  hus["n_freq"] = c.husimi.n_freq;
  hus["window_fwhm_fs"] = opt(c.husimi.window_fwhm_fs);
  j["husimi"] = hus;
  nlohmann::ordered_json rev;
  rev["smooth_fwhm_ps"] = c.extrema.smooth_fwhm_ps;
  rev["min_prominence"] = c.extrema.min_prominence;
  rev["center_level"] = c.extrema.center_level;
  rev["q_max"] = c.q_max;
  rev["tolerance_ps"] = c.match_tolerance_ps;
  j["revivals"] = rev;
  j["output_dir"] = c.output_dir;
  return j.dump(2) + "\n";
}

void validate(const RunConfig& c) {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0)) throw ConfigError(std::string("config field '") + name + "' must be > 0");
  };
  positive(c.temperature_k, "temperature_k");
  positive(c.spin.even, "spin_weights.even");
  positive(c.spin.odd, "spin_weights.odd");
  positive(c.pump.center_cm1, "pump.center_cm1");
  positive(c.pump.fwhm_fs, "pump.fwhm_fs");
  positive(c.stokes.center_cm1, "stokes.center_cm1");
  positive(c.stokes.fwhm_fs, "stokes.fwhm_fs");
  if (c.tau_c_ps) positive(*c.tau_c_ps, "tau_c_ps");
  if (c.ratio_source == RatioSource::Fixed) positive(c.fixed_ratio, "branch_ratio.value");
  if (c.ratio_source == RatioSource::Computed && c.polarizability.re <= 0.0) {
    throw ConfigError("config field 'branch_ratio.re' must be > 0");
  }
  if (c.grid.t0_ps < 0.0) throw ConfigError("config field 'grid.t0_ps' must be >= 0");
  if (!(c.grid.t1_ps > c.grid.t0_ps)) throw ConfigError("config field 'grid.t1_ps' must exceed grid.t0_ps");
  positive(c.grid.dt_ps, "grid.dt_ps");
  if ((c.grid.t1_ps - c.grid.t0_ps) / c.grid.dt_ps > 5e7) {
    throw ConfigError("config field 'grid.dt_ps' gives more than 5e7 samples");
  }
  if (c.grid.probe_fwhm_fs) positive(*c.grid.probe_fwhm_fs, "grid.probe_fwhm_fs");
  if (!(c.spectrum.hi_cm1 > c.spectrum.lo_cm1)) throw ConfigError("config field 'spectrum.hi_cm1' must exceed lo_cm1");
  positive(c.spectrum.step_cm1, "spectrum.step_cm1");
  if (c.husimi.target != "pulses" && c.husimi.target != "two_photon") {
    throw ConfigError("config field 'husimi.target' must be \"pulses\" or \"two_photon\"");
  }
  if (c.husimi.window_fwhm_fs) positive(*c.husimi.window_fwhm_fs, "husimi.window_fwhm_fs");
  positive(c.extrema.smooth_fwhm_ps, "revivals.smooth_fwhm_ps");
  positive(c.match_tolerance_ps, "revivals.tolerance_ps");
  if (c.extrema.min_prominence < 0.0) throw ConfigError("config field 'revivals.min_prominence' must be >= 0");
  if (!(c.extrema.center_level > 0.0 && c.extrema.center_level < 1.0)) {
    throw ConfigError("config field 'revivals.center_level' must lie in (0, 1)");
  }
  if (c.output_dir.empty()) throw ConfigError("config field 'output_dir' must not be empty");
  // Resolving the constants checks that the state exists and is physical.
  (void)resolve_constants(c);
}

SpectroscopicConstants resolve_constants(const RunConfig& c) {
  const auto db = c.constants_db ? ConstantsDatabase::from_file(*c.constants_db) : ConstantsDatabase::builtin();
  SpectroscopicConstants k = db.at(c.state);
  if (c.gamma_e) k.gamma_e = *c.gamma_e;
  if (c.beta_e) k.beta_e = *c.beta_e;
  if (!k.is_physical()) throw ConfigError("state '" + c.state + "' has unphysical constants after overrides");
  return k;
}

BranchingRatio resolve_ratio(const RunConfig& c) {
  switch (c.ratio_source) {
    case RatioSource::Computed: return branching_ratio(c.polarizability);
    case RatioSource::Fixed: return BranchingRatio::fixed(c.fixed_ratio);
    case RatioSource::QOnly: return BranchingRatio::q_only();
  }
  return {};
}

std::string pulse_summary(const Pulse& pump, const Pulse& stokes) {
  std::ostringstream s;
  s.precision(12);
  s << "pump " << pump.center_cm1 << " cm-1/" << pump.fwhm_fs << " fs/chirp " << pump.chirp_fs2 << " fs2/delay "
    << pump.delay_fs << " fs; stokes " << stokes.center_cm1 << " cm-1/" << stokes.fwhm_fs << " fs/chirp "
    << stokes.chirp_fs2 << " fs2/delay " << stokes.delay_fs << " fs";
  return s.str();
}

Pipeline build_pipeline(const RunConfig& c) {
  validate(c);
  const auto constants = resolve_constants(c);
  auto ensemble = build_ensemble(c.temperature_k, rotational_constants(constants, 0).b, c.spin);
  Pulse pump = c.pump, stokes = c.stokes;
  validate(pump);
  validate(stokes);
  if (c.center_on_q) {
    try {
      stokes.delay_fs = stokes_delay_for_center(pump, stokes, band_origin(constants, c.v1));
    } catch (const DomainError&) {
      // Transform-limited pair: the spectrum does not move with delay.
    }
  }
  const auto ratio = resolve_ratio(c);
  auto raw = enumerate_lines(ensemble, constants, c.v1);
  auto envelope = two_photon_spectrum(pump, stokes, line_sampling_grid(raw)).normalized();
  auto lines = assign_amplitudes(raw, envelope, ratio);
  lines.info.pulse_settings = pulse_summary(pump, stokes);
  DecayModel decay = c.tau_c_ps ? DecayModel::collisional(*c.tau_c_ps) : DecayModel::none();
  return {constants, std::move(ensemble), pump, stokes, ratio, std::move(envelope), std::move(lines), decay};
}

}  // namespace rovib
