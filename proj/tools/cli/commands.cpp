#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "plots.hpp"
#include "rovib/analysis.hpp"
#include "rovib/config.hpp"
#include "rovib/errors.hpp"
#include "rovib/fit.hpp"
#include "rovib/husimi.hpp"
#include "rovib/io.hpp"

namespace rovib::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

/// Collects the files written by one command and emits the metadata JSON.
class OutputDir {
public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  template <class Writer>
  void write(const std::string& name, Writer&& w) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + (dir_ / name).string() + "'");
    w(f);
    if (!f) throw Error("write failed for '" + (dir_ / name).string() + "'");
    files_.push_back(name);
  }

  void text(const std::string& name, const std::string& content) {
    write(name, [&](std::ostream& o) { o << content; });
  }

  void metadata(const std::string& command, const RunConfig* config, const ojson& summary) {
    ojson j;
    j["command"] = command;
    j["version"] = ROVIB_VERSION;
    j[std::string(kCreatedKey)] = utc_now();
    j["config"] = config ? ojson::parse(run_config_json(*config)) : ojson(nullptr);
    j["summary"] = summary;
    auto files = files_;
    if (std::find(files.begin(), files.end(), command + ".json") != files.end()) {
      throw Error("output file " + command + ".json written twice");
    }
    files.push_back(command + ".json");
    j["files"] = files;
    text(command + ".json", j.dump(2) + "\n");
  }

  const fs::path& path() const { return dir_; }

private:
  fs::path dir_;
  std::vector<std::string> files_;
};

// --- shared options ------------------------------------------------------------

struct RunOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<double> t0, t1, dt, chirp, tau_c, temperature;
  bool q_only = false;
  bool no_decay = false;
  bool center_on_q = false;
};

void add_run_options(CLI::App* cmd, RunOptions& o, bool with_grid) {
  cmd->add_option("-c,--config", o.config_path, "JSON run configuration (defaults apply to omitted fields)");
  cmd->add_option("-o,--out", o.out_dir, "output directory (overrides output_dir)");
  cmd->add_option("--temperature", o.temperature, "temperature, K");
  cmd->add_option("--chirp", o.chirp, "chirp applied to both pulses, fs^2");
  cmd->add_flag("--center-on-q", o.center_on_q, "shift the Stokes delay to centre the excitation on the Q branch");
  cmd->add_flag("--q-only", o.q_only, "drive the Q branch only");
  if (with_grid) {
    cmd->add_option("--t0", o.t0, "first delay, ps");
    cmd->add_option("--t1", o.t1, "last delay, ps");
    cmd->add_option("--dt", o.dt, "delay step, ps");
    cmd->add_option("--tau-c", o.tau_c, "collisional decay time of the coherence amplitude, ps");
    cmd->add_flag("--no-decay", o.no_decay, "disable collisional decay");
  }
}

RunConfig load_config(const RunOptions& o) {
  RunConfig c = o.config_path.empty() ? RunConfig{} : load_run_config(o.config_path);
  if (!o.out_dir.empty()) c.output_dir = o.out_dir;
  if (o.temperature) c.temperature_k = *o.temperature;
  if (o.chirp) c.pump.chirp_fs2 = c.stokes.chirp_fs2 = *o.chirp;
  if (o.center_on_q) c.center_on_q = true;
  if (o.q_only) c.ratio_source = RatioSource::QOnly;
  if (o.t0) c.grid.t0_ps = *o.t0;
  if (o.t1) c.grid.t1_ps = *o.t1;
  if (o.dt) c.grid.dt_ps = *o.dt;
  if (o.tau_c) c.tau_c_ps = *o.tau_c;
  if (o.no_decay) c.tau_c_ps.reset();
  validate(c);
  return c;
}

std::string fmt(double x, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << x;
  return s.str();
}

CsvMetadata trace_metadata(const RunConfig& c, const Pipeline& p) {
  CsvMetadata m;
  m.set(std::string(kCreatedKey), utc_now());
  m.set("constants", p.constants.label + " (gamma_e " + format_number(p.constants.gamma_e_value()) + ", beta_e " +
                         format_number(p.constants.beta_e_value()) + ")");
  m.set("temperature_k", format_number(c.temperature_k));
  m.set("tau_c_ps", p.decay.tau_c_ps ? format_number(*p.decay.tau_c_ps) + " (amplitude decay)" : "none");
  m.set("pulses", pulse_summary(p.pump, p.stokes));
  m.set("branch_ratio", p.ratio.ratio ? format_number(*p.ratio.ratio) : "q_only");
  m.set("frame_cm1", format_number(p.lines.info.frame_cm1));
  m.set("lines", std::to_string(p.lines.lines.size()));
  return m;
}

CharacteristicTimes times_for(const Pipeline& p, int v1) {
  return characteristic_times(p.constants, v1, thermal_J_spread(p.ensemble));
}

// --- constants ---------------------------------------------------------------

struct ConstantsOptions {
  std::string state = "N2_X";
  std::string db;
  std::optional<double> gamma_e;
  bool fitted = false;
  bool json = false;
  double temperature = 295.0;
};

int cmd_constants(const ConstantsOptions& o, std::ostream& out) {
  const auto db = o.db.empty() ? ConstantsDatabase::builtin() : ConstantsDatabase::from_file(o.db);
  SpectroscopicConstants c = db.at(o.state);
  if (o.fitted) c.gamma_e = kN2FittedGammaE;
  if (o.gamma_e) c.gamma_e = *o.gamma_e;
  const auto b0 = rotational_constants(c, 0).b;
  const auto b1 = rotational_constants(c, 1).b;
  const auto ens = build_ensemble(o.temperature, b0);
  const auto t = characteristic_times(c, 1, thermal_J_spread(ens));
  auto opt = [](const std::optional<double>& x) { return x ? ojson(*x) : ojson(nullptr); };

  ojson j;
  j["state"] = c.label;
  j["Te"] = c.te;
  j["omega_e"] = c.omega_e;
  j["omega_e_xe"] = c.omega_e_xe;
  j["omega_e_ye"] = c.omega_e_ye;
  j["B_e"] = c.b_e;
  j["alpha_e"] = c.alpha_e;
  j["gamma_e"] = opt(c.gamma_e);
  j["D_e"] = c.d_e;
  j["beta_e"] = opt(c.beta_e);
  j["B0"] = b0;
  j["B1"] = b1;
  j["G1_minus_G0"] = band_origin(c, 1);
  j["T_rovib_ps"] = opt(t.rovib_revival_ps);
  j["T_rot_ps"] = t.rotational_revival_ps;
  j["T_dephasing_ps"] = opt(t.dephasing_estimate_ps);
  j["temperature_k"] = o.temperature;
  if (o.json) {
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  auto row = [&](const char* name, const std::string& value, const char* unit) {
    out << std::left << std::setw(14) << name << value << (unit[0] ? " " : "") << unit << "\n";
  };
  auto opt_str = [](const std::optional<double>& x) { return x ? fmt(*x, 10) : std::string("-"); };
  out << "state " << c.label << " (all constants in cm-1)\n";
  row("Te", fmt(c.te, 10), "");
  row("omega_e", fmt(c.omega_e, 10), "");
  row("omega_e x_e", fmt(c.omega_e_xe, 10), "");
  row("omega_e y_e", fmt(c.omega_e_ye, 10), "");
  row("B_e", fmt(c.b_e, 10), "");
  row("alpha_e", fmt(c.alpha_e, 10), "");
  row("gamma_e", opt_str(c.gamma_e), "");
  row("D_e", fmt(c.d_e, 10), "");
  row("beta_e", opt_str(c.beta_e), "");
  out << "\n";
  row("B0", fmt(b0, 10), "cm-1");
  row("B1", fmt(b1, 10), "cm-1");
  row("G(1)-G(0)", fmt(band_origin(c, 1), 10), "cm-1");
  row("T_RoVib", t.rovib_revival_ps ? fmt(*t.rovib_revival_ps, 7) : "-", "ps");
  row("T_rot", fmt(t.rotational_revival_ps, 6), "ps");
  row("T_dephasing", t.dephasing_estimate_ps ? fmt(*t.dephasing_estimate_ps, 4) : "-",
      ("ps (at " + fmt(o.temperature) + " K)").c_str());
  return kExitOk;
}

// --- branching ---------------------------------------------------------------

struct BranchingOptions {
  PolarizabilityDerivatives p = n2_polarizability_derivatives();
  bool json = false;
};

int cmd_branching(const BranchingOptions& o, std::ostream& out) {
  const auto r = branching_ratio(o.p);
  ojson j;
  j["a_perp_prime"] = o.p.a_perp_prime;
  j["delta_a_prime"] = o.p.delta_a_prime;
  j["re"] = o.p.re;
  j["ratio"] = r.ratio ? ojson(*r.ratio) : ojson(nullptr);
  j["intensity_ratio"] = r.intensity_ratio() ? ojson(*r.intensity_ratio()) : ojson(nullptr);
  if (o.json) {
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  if (!r.ratio) {
    out << "Delta a' = 0: no O/S coupling, Q branch only\n";
    return kExitOk;
  }
  out << "N   = " << fmt(*r.ratio, 6) << "   (Q to O/S amplitude ratio)\n";
  out << "N^2 = " << fmt(*r.intensity_ratio(), 5) << "\n";
  out << "O:Q:S intensity = 1:" << fmt(*r.intensity_ratio(), 3) << ":1\n";
  return kExitOk;
}

// --- spectrum ----------------------------------------------------------------

int cmd_spectrum(const RunOptions& o, std::ostream& out) {
  const auto c = load_config(o);
  Pulse pump = c.pump, stokes = c.stokes;
  validate(pump);
  validate(stokes);
  const auto consts = resolve_constants(c);
  if (c.center_on_q) {
    try {
      stokes.delay_fs = stokes_delay_for_center(pump, stokes, band_origin(consts, c.v1));
    } catch (const DomainError&) {
    }
  }
  const auto a2 = two_photon_spectrum(pump, stokes, uniform_grid(c.spectrum.lo_cm1, c.spectrum.hi_cm1, c.spectrum.step_cm1));

  ojson summary;
  summary["power_fwhm_cm1"] = a2.power_fwhm();
  summary["power_centroid_cm1"] = a2.power_centroid();
  summary["peak_cm1"] = a2.peak_position();
  summary["stokes_delay_fs"] = stokes.delay_fs;
  summary["q_branch_origin_cm1"] = band_origin(consts, c.v1);

  CsvMetadata meta;
  meta.set("pulses", pulse_summary(pump, stokes));
  OutputDir dir(c.output_dir);
  dir.write("spectrum.csv", [&](std::ostream& f) { write_spectrum_csv(f, a2, meta); });
  dir.text("spectrum.gp", spectrum_plot("spectrum.csv"));
  dir.metadata("spectrum", &c, summary);

  out << "two-photon spectrum: FWHM(|A2|^2) " << fmt(a2.power_fwhm()) << " cm-1, centroid "
      << fmt(a2.power_centroid(), 8) << " cm-1, Q origin " << fmt(band_origin(consts, c.v1), 8) << " cm-1\n";
  out << "wrote " << (dir.path() / "spectrum.csv").string() << "\n";
  return kExitOk;
}

// --- husimi ------------------------------------------------------------------

int cmd_husimi(const RunOptions& o, std::ostream& out) {
  const auto c = load_config(o);
  Pulse pump = c.pump, stokes = c.stokes;
  validate(pump);
  validate(stokes);
  const std::vector<Pulse> pulses{pump, stokes};
  const double window = c.husimi.window_fwhm_fs.value_or(default_window_fwhm(pulses));

  std::optional<HusimiMap> map;
  if (c.husimi.target == "pulses") {
    map = husimi_map(pulses, window, default_husimi_axes(pulses, window, c.husimi.n_time, c.husimi.n_freq));
  } else {
    const auto a2 = two_photon_spectrum(pump, stokes,
                                        uniform_grid(c.spectrum.lo_cm1, c.spectrum.hi_cm1, c.spectrum.step_cm1));
    map = husimi_map(a2, window, default_husimi_axes(a2, window, c.husimi.n_time, c.husimi.n_freq));
  }

  ojson summary;
  summary["target"] = c.husimi.target;
  summary["window_fwhm_fs"] = window;
  summary["total"] = map->total();
  summary["tilt"] = map->tilt();
  summary["ridge_slope_cm1_per_fs"] = map->ridge_slope();

  CsvMetadata meta;
  meta.set("target", c.husimi.target);
  meta.set("window_fwhm_fs", format_number(window));
  meta.set("pulses", pulse_summary(pump, stokes));
  OutputDir dir(c.output_dir);
  dir.write("husimi.csv", [&](std::ostream& f) { write_husimi_csv(f, *map, meta); });
  dir.text("husimi.gp", husimi_plot("husimi.csv", "Husimi map (" + c.husimi.target + ")"));
  dir.metadata("husimi", &c, summary);

  out << "husimi map (" << c.husimi.target << "): window " << fmt(window) << " fs, tilt " << fmt(map->tilt(), 4)
      << ", ridge slope " << fmt(map->ridge_slope(), 4) << " cm-1/fs\n";
  out << "wrote " << (dir.path() / "husimi.csv").string() << "\n";
  return kExitOk;
}

// --- trace -------------------------------------------------------------------

int cmd_trace(const RunOptions& o, std::ostream& out, std::ostream& err) {
  const auto c = load_config(o);
  const auto p = build_pipeline(c);
  const auto trace = signal_trace(p.lines, p.decay, c.grid);
  for (const auto& w : trace.warnings) err << "warning: " << w << "\n";
  const auto t = times_for(p, c.v1);

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace.times[i] > 25.0 && (!best || trace.signal[i] > trace.signal[*best])) best = i;
  }

  ojson summary;
  summary["lines"] = p.lines.lines.size();
  summary["j_max"] = p.ensemble.j_max();
  summary["T_rovib_ps"] = t.rovib_revival_ps ? ojson(*t.rovib_revival_ps) : ojson(nullptr);
  summary["T_rot_ps"] = t.rotational_revival_ps;
  summary["max_after_25ps_time_ps"] = best ? ojson(trace.times[*best]) : ojson(nullptr);
  summary["max_after_25ps_signal"] = best ? ojson(trace.signal[*best]) : ojson(nullptr);
  summary["stokes_delay_fs"] = p.stokes.delay_fs;
  summary["warnings"] = trace.warnings;

  OutputDir dir(c.output_dir);
  dir.write("trace.csv", [&](std::ostream& f) { write_trace_csv(f, make_trace_record(trace, trace_metadata(c, p))); });
  dir.write("lines.csv", [&](std::ostream& f) { write_lines_csv(f, p.lines); });
  dir.write("ensemble.csv", [&](std::ostream& f) { write_ensemble_csv(f, p.ensemble); });
  dir.text("trace.gp", trace_plot("trace.csv", "CARS trace, " + p.constants.label + ", " + fmt(c.temperature_k) + " K"));
  dir.metadata("trace", &c, summary);

  out << trace.size() << " samples, " << p.lines.lines.size() << " lines";
  if (t.rovib_revival_ps) out << ", T_RoVib " << fmt(*t.rovib_revival_ps, 7) << " ps";
  out << "\n";
  if (best) out << "largest signal after 25 ps: " << fmt(trace.signal[*best], 4) << " at " << fmt(trace.times[*best], 7) << " ps\n";
  out << "wrote " << (dir.path() / "trace.csv").string() << "\n";
  return kExitOk;
}

// --- revivals ----------------------------------------------------------------

struct RevivalOptions {
  RunOptions run;
  std::string trace_path;
  bool json = false;
};

int cmd_revivals(const RevivalOptions& o, std::ostream& out) {
  const auto c = load_config(o.run);
  const auto p = build_pipeline(c);
  const auto t = times_for(p, c.v1);
  if (!t.rovib_revival_ps) throw DomainError("B1 == B0: there is no ro-vibrational revival");

  std::vector<double> times, signal, magnitude;
  if (o.trace_path.empty()) {
    const auto trace = signal_trace(p.lines, p.decay, c.grid);
    times = trace.times;
    signal = trace.signal;
    for (const auto& r : trace.rho) magnitude.push_back(std::abs(r));
  } else {
    std::ifstream in(o.trace_path);
    if (!in) throw ConfigError("cannot open trace file '" + o.trace_path + "'");
    const auto rec = read_trace_csv(in);
    times = rec.times;
    signal = rec.signal;
    for (const auto& r : rec.rho) magnitude.push_back(std::abs(r));
  }

  const auto extrema = detect_extrema(times, signal, c.extrema);
  auto report = classify_fractions(extrema, *t.rovib_revival_ps, c.q_max, c.match_tolerance_ps);
  report.dephasing_time_ps = dephasing_time(times, magnitude, c.extrema.smooth_fwhm_ps);

  OutputDir dir(c.output_dir);
  dir.text("revival_report.json", revival_report_json(report));
  dir.text("revivals.txt", revival_report_table(report));
  ojson summary;
  summary["extrema"] = report.entries.size();
  summary["source"] = o.trace_path.empty() ? "simulated" : o.trace_path;
  dir.metadata("revivals", &c, summary);

  out << (o.json ? revival_report_json(report) : revival_report_table(report));
  return kExitOk;
}

// --- fit ---------------------------------------------------------------------

struct FitCliOptions {
  RunOptions run;
  std::string data_path;
  std::vector<std::string> free{"gamma_e", "tau_c", "scale", "t_offset"};
  std::vector<std::string> init;
  std::vector<std::string> bounds;
  std::string profile;
  std::uint64_t seed = 1;
  int restarts = 3;
  int max_iterations = 4000;
};

std::pair<std::string, std::string> split_assignment(const std::string& s, const char* what) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw ConfigError(std::string(what) + " '" + s + "' must look like name=value");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

FitParameter parameter_or_throw(const std::string& name) {
  auto p = parse_parameter(name);
  if (!p) throw ConfigError("unknown fit parameter '" + name + "' (gamma_e, tau_c, scale, t_offset, beta_e)");
  return *p;
}

double number_or_throw(const std::string& text, const std::string& context) {
  auto v = parse_number(text);
  if (!v) throw ConfigError(context + ": '" + text + "' is not a number");
  return *v;
}

std::vector<double> split_numbers(const std::string& text, const std::string& context) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(':', start);
    out.push_back(number_or_throw(text.substr(start, pos == std::string::npos ? pos : pos - start), context));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

int cmd_fit(const FitCliOptions& o, std::ostream& out) {
  const auto c = load_config(o.run);
  const auto p = build_pipeline(c);

  std::ifstream in(o.data_path);
  if (!in) throw ConfigError("cannot open data file '" + o.data_path + "'");
  const auto data = read_signal_csv(in);

  FitProblem problem;
  problem.times = data.times;
  problem.data = data.signal;
  problem.model = ForwardModel{p.constants, c.temperature_k, c.spin, p.envelope, p.ratio, c.v1, c.grid.probe_fwhm_fs};
  auto& params = problem.parameters;
  for (auto& [k, spec] : params) spec.free = false;
  // Fixed parameters take their values from the configuration.
  params[FitParameter::GammaE].initial = p.constants.gamma_e_value();
  params[FitParameter::BetaE].initial = p.constants.beta_e_value();
  if (c.tau_c_ps) {
    params[FitParameter::TauC].initial = *c.tau_c_ps;
  } else {
    params.erase(FitParameter::TauC);
  }
  const auto defaults = FitProblem::default_parameters();
  for (const auto& name : o.free) {
    const auto which = parameter_or_throw(name);
    params[which] = defaults.at(which);
    params[which].free = true;
  }
  for (const auto& s : o.init) {
    const auto [name, value] = split_assignment(s, "--init");
    params[parameter_or_throw(name)].initial = number_or_throw(value, "--init " + name);
  }
  for (const auto& s : o.bounds) {
    const auto [name, value] = split_assignment(s, "--bounds");
    const auto lohi = split_numbers(value, "--bounds " + name);
    if (lohi.size() != 2) throw ConfigError("--bounds " + name + " must be lo:hi");
    auto& spec = params[parameter_or_throw(name)];
    spec.lower = lohi[0];
    spec.upper = lohi[1];
  }
  for (const auto& [which, spec] : params) {
    if (!spec.free && (spec.initial < spec.lower || spec.initial > spec.upper)) {
      params[which].lower = std::min(spec.lower, spec.initial);
      params[which].upper = std::max(spec.upper, spec.initial);
    }
  }

  FitOptions fo;
  fo.seed = o.seed;
  fo.restarts = o.restarts;
  fo.max_iterations = o.max_iterations;
  const auto result = fit(problem, fo);

  OutputDir dir(c.output_dir);
  const auto json_text = fit_result_json(result);
  dir.text("fit_result.json", json_text);
  const auto model = model_signal(problem.model, result.values, problem.times);
  dir.write("fit_model.csv", [&](std::ostream& f) {
    f << "time_ps,data,model\n";
    for (std::size_t i = 0; i < model.size(); ++i) {
      f << format_number(problem.times[i]) << ',' << format_number(problem.data[i]) << ',' << format_number(model[i])
        << '\n';
    }
  });
  dir.text("fit_model.gp", fit_plot("fit_model.csv"));

  if (!o.profile.empty()) {
    const auto [name, spec] = split_assignment(o.profile, "--profile");
    const auto which = parameter_or_throw(name);
    const auto g = split_numbers(spec, "--profile " + name);
    if (g.size() != 3 || g[2] < 2 || g[2] != std::floor(g[2])) {
      throw ConfigError("--profile " + name + " must be lo:hi:count with count >= 2");
    }
    std::vector<double> grid;
    const int n = static_cast<int>(g[2]);
    for (int i = 0; i < n; ++i) grid.push_back(g[0] + (g[1] - g[0]) * i / (n - 1));
    const auto prof = profile_parameter(problem, which, grid, fo);
    dir.write("profile.csv", [&](std::ostream& f) {
      f << name << ",rss,converged\n";
      for (const auto& pt : prof) f << format_number(pt.value) << ',' << format_number(pt.rss) << ',' << pt.converged << '\n';
    });
    dir.text("profile.gp", profile_plot("profile.csv", name));
  }

  ojson summary = ojson::parse(json_text);
  summary["data"] = o.data_path;
  dir.metadata("fit", &c, summary);
  out << json_text;
  if (!result.identifiable) throw DomainError(result.message);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ro-vibrational coherence simulator and revival fitter"};
  app.set_version_flag("--version", ROVIB_VERSION);
  app.require_subcommand(1);

  ConstantsOptions co;
  auto* constants = app.add_subcommand("constants", "print spectroscopic constants and characteristic times");
  constants->add_option("state", co.state, "state label")->capture_default_str();
  constants->add_option("--db", co.db, "constants database JSON (built-in table by default)");
  constants->add_option("--gamma-e", co.gamma_e, "override gamma_e, cm-1");
  constants->add_flag("--fitted-gamma-e", co.fitted, "use the fitted gamma_e = -2.6e-5 cm-1");
  constants->add_option("--temperature", co.temperature, "temperature for the dephasing estimate, K")->capture_default_str();
  constants->add_flag("--json", co.json, "JSON output");

  BranchingOptions bo;
  auto* branching = app.add_subcommand("branching", "O/S to Q branching ratio from polarizability derivatives");
  branching->add_option("--a-perp", bo.p.a_perp_prime, "a'_perp")->capture_default_str();
  branching->add_option("--delta-a", bo.p.delta_a_prime, "Delta a'")->capture_default_str();
  branching->add_option("--re", bo.p.re, "equilibrium distance the derivatives are divided by")->capture_default_str();
  branching->add_flag("--json", bo.json, "JSON output");

  RunOptions so;
  auto* spectrum = app.add_subcommand("spectrum", "two-photon excitation spectrum |A2|^2");
  add_run_options(spectrum, so, false);

  RunOptions ho;
  auto* husimi = app.add_subcommand("husimi", "Husimi time-frequency map of the pulses or of the two-photon field");
  add_run_options(husimi, ho, false);

  RunOptions to;
  auto* trace = app.add_subcommand("trace", "simulate a CARS trace");
  add_run_options(trace, to, true);

  RevivalOptions ro;
  auto* revivals = app.add_subcommand("revivals", "detect and classify full and fractional revivals");
  add_run_options(revivals, ro.run, true);
  revivals->add_option("--trace", ro.trace_path, "analyse an existing trace CSV instead of simulating");
  revivals->add_flag("--json", ro.json, "print the report as JSON");

  FitCliOptions fo;
  auto* fitcmd = app.add_subcommand("fit", "fit gamma_e, tau_c, scale and t_offset to a measured trace");
  add_run_options(fitcmd, fo.run, false);
  fitcmd->add_option("-d,--data", fo.data_path, "two-column CSV: time_ps, signal")->required();
  fitcmd->add_option("--free", fo.free, "free parameters")->delimiter(',')->capture_default_str();
  fitcmd->add_option("--init", fo.init, "initial value, name=value")->delimiter(',');
  fitcmd->add_option("--bounds", fo.bounds, "bounds, name=lo:hi")->delimiter(',');
  fitcmd->add_option("--profile", fo.profile, "residual profile, name=lo:hi:count");
  fitcmd->add_option("--seed", fo.seed, "restart jitter seed")->capture_default_str();
  fitcmd->add_option("--restarts", fo.restarts, "jittered restarts")->capture_default_str();
  fitcmd->add_option("--max-iterations", fo.max_iterations, "iteration cap per simplex run")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (constants->parsed()) return cmd_constants(co, out);
    if (branching->parsed()) return cmd_branching(bo, out);
    if (spectrum->parsed()) return cmd_spectrum(so, out);
    if (husimi->parsed()) return cmd_husimi(ho, out);
    if (trace->parsed()) return cmd_trace(to, out, err);
    if (revivals->parsed()) return cmd_revivals(ro, out);
    if (fitcmd->parsed()) return cmd_fit(fo, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace rovib::cli
