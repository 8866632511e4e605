#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "rovib/analysis.hpp"
#include "rovib/dynamics.hpp"
#include "rovib/ensemble.hpp"
#include "rovib/excitation.hpp"
#include "rovib/molmodel.hpp"
#include "rovib/pulses.hpp"

namespace rovib {

enum class RatioSource { Computed, Fixed, QOnly };

struct SpectrumGridConfig {
  double lo_cm1 = 1900.0;
  double hi_cm1 = 2760.0;
  double step_cm1 = 0.5;
};

struct HusimiConfig {
  /// "pulses" (pump and Stokes fields) or "two_photon" (difference-frequency field).
  std::string target = "pulses";
  std::size_t n_time = 256;
  std::size_t n_freq = 256;
  /// Defaults to the shortest transform-limited pulse.
  std::optional<double> window_fwhm_fs;
};

/// One simulation run. Defaults reproduce the 158 Torr room-temperature
/// nitrogen experiment.
struct RunConfig {
  /// Empty: the built-in nitrogen table.
  std::optional<std::string> constants_db;
  std::string state = "N2_X";
  /// Overrides applied to the selected state; gamma_e defaults to the fitted value.
  std::optional<double> gamma_e = kN2FittedGammaE;
  std::optional<double> beta_e;
  int v1 = 1;

  double temperature_k = 295.0;
  SpinWeights spin;

  Pulse pump{12500.0, 130.0, 0.0, 0.0, 1.0};
  Pulse stokes{10183.0, 130.0, 0.0, 0.0, 1.0};
  /// Shift the Stokes delay so the excitation spectrum is centred on the Q
  /// branch origin. Transform-limited pairs do not move with delay and are left as given.
  bool center_on_q = false;

  RatioSource ratio_source = RatioSource::Computed;
  double fixed_ratio = 0.0;
  PolarizabilityDerivatives polarizability = n2_polarizability_derivatives();

  std::optional<double> tau_c_ps = 256.0;
  TraceGrid grid;

  SpectrumGridConfig spectrum;
  HusimiConfig husimi;
  ExtremaOptions extrema;
  int q_max = 9;
  double match_tolerance_ps = 1.0;

  std::string output_dir = "rovib_out";
};

/// Parses a JSON object; every field is optional and unknown keys are
/// rejected. Errors are ConfigError messages naming the offending field.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::string& path);
/// Canonical JSON form of a configuration (parses back to an equal config).
std::string run_config_json(const RunConfig& config);

/// Checks cross-field requirements (state exists, grid valid, ...).
void validate(const RunConfig& config);

/// All intermediate products of the forward model for one configuration.
struct Pipeline {
  SpectroscopicConstants constants;
  ThermalEnsemble ensemble;
  Pulse pump;
  Pulse stokes;
  BranchingRatio ratio;
  /// A2 sampled around every line, scaled to max |A2| = 1.
  TwoPhotonSpectrum envelope;
  LineTable lines;
  DecayModel decay;
};

SpectroscopicConstants resolve_constants(const RunConfig& config);
BranchingRatio resolve_ratio(const RunConfig& config);
Pipeline build_pipeline(const RunConfig& config);

/// Short description of the pulse pair, for metadata headers.
std::string pulse_summary(const Pulse& pump, const Pulse& stokes);

}  // namespace rovib
