#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rovib/ensemble.hpp"
#include "rovib/excitation.hpp"
#include "rovib/molmodel.hpp"
#include "rovib/pulses.hpp"

namespace rovib {

enum class FitParameter { GammaE, TauC, Scale, TimeOffset, BetaE };

const char* parameter_name(FitParameter p);
/// Accepts "gamma_e", "tau_c", "scale", "t_offset", "beta_e".
std::optional<FitParameter> parse_parameter(std::string_view name);

struct ParameterSpec {
  double initial = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool free = false;
  /// Convergence tolerance on the parameter, in its own units.
  double tolerance = 0.0;
};

using ParameterValues = std::map<FitParameter, double>;

/// Everything held fixed while fitting: the constants (gamma_e, beta_e are
/// overwritten by parameters), ensemble settings and excitation envelope.
struct ForwardModel {
  SpectroscopicConstants constants;
  double temperature_k = 295.0;
  SpinWeights spin;
  TwoPhotonSpectrum envelope;
  BranchingRatio ratio;
  int v1 = 1;
  std::optional<double> probe_fwhm_fs;

  /// Line table for the given gamma_e / beta_e values.
  LineTable lines(const ParameterValues& values) const;
};

/// scale * S(t - t_offset) / S(0), S = |rho|^2 with collisional decay tau_c;
/// zero before excitation (t < t_offset). Times must be uniform when a probe
/// duration is set.
std::vector<double> model_signal(const ForwardModel& model, const ParameterValues& values,
                                 std::span<const double> times);

struct FitProblem {
  std::vector<double> times;
  std::vector<double> data;
  ForwardModel model;
  std::map<FitParameter, ParameterSpec> parameters = default_parameters();

  /// gamma_e, tau_c, scale and t_offset free; beta_e fixed at 0.
  static std::map<FitParameter, ParameterSpec> default_parameters();

  std::vector<FitParameter> free_parameters() const;
  ParameterValues initial_values() const;
  /// Throws DomainError describing the first violated requirement.
  void validate() const;
};

struct FitOptions {
  int max_iterations = 4000;
  int restarts = 3;
  std::uint64_t seed = 1;
  /// Restart jitter and initial simplex size, as fractions of each bound range.
  double restart_jitter = 0.02;
  double initial_step = 0.05;
};

struct FitResult {
  ParameterValues values;
  /// One-sigma estimates from the curvature of the residual at the optimum.
  ParameterValues uncertainties;
  std::vector<FitParameter> free;
  double rss = 0.0;
  double initial_rss = 0.0;
  bool converged = false;
  bool identifiable = true;
  int iterations = 0;
  int evaluations = 0;
  std::string message;
};

/// Minimizes sum (model - data)^2 over the free parameters by bounded
/// Nelder-Mead in range-normalized coordinates with jittered restarts from the
/// incumbent. A free scale is eliminated in closed form (clamped least squares).
/// Deterministic for fixed problem, options and seed.
FitResult fit(const FitProblem& problem, const FitOptions& opts = {});

struct ProfilePoint {
  double value = 0.0;
  double rss = 0.0;
  bool converged = false;
};

/// Residual profile: the named parameter is fixed at each grid value and the
/// remaining free parameters refitted. Throws DomainError if it is not free.
std::vector<ProfilePoint> profile_parameter(const FitProblem& problem, FitParameter which,
                                            std::span<const double> grid, const FitOptions& opts = {});

}  // namespace rovib
