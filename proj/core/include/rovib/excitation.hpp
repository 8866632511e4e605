#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "rovib/ensemble.hpp"
#include "rovib/molmodel.hpp"
#include "rovib/pulses.hpp"

namespace rovib {

enum class Branch { O, Q, S };

char branch_letter(Branch b);

/// One |v=0,J> -> |v=v1,J'> Raman transition.
struct RamanLine {
  Branch branch = Branch::Q;
  int j_lower = 0;
  int j_upper = 0;
  double wavenumber_cm1 = 0.0;
  double thermal_weight = 0.0;
  std::complex<double> amplitude;
};

struct LineTableInfo {
  std::string constants_label;
  double temperature_k = 0.0;
  int v1 = 1;
  /// Rotating-frame reference G(v1) - G(0).
  double frame_cm1 = 0.0;
  std::string pulse_settings;
};

/// Ordered Q, S, O lines (ascending J within each branch).
struct LineTable {
  std::vector<RamanLine> lines;
  LineTableInfo info;

  std::size_t count(Branch b) const;
};

/// Polarizability derivatives. Only their ratio enters the branching ratio;
/// re is kept so that inputs can be given in the tabulated x/Re form.
struct PolarizabilityDerivatives {
  double a_perp_prime = 0.0;
  double delta_a_prime = 0.0;
  double re = 1.0;
};

/// Static values for nitrogen, a'_perp = 8.7/Re and Delta a' = 13.3/Re (atomic units).
PolarizabilityDerivatives n2_polarizability_derivatives();

/// Ratio N of the J->J to J->J+-2 Raman amplitudes, or "no O/S coupling".
struct BranchingRatio {
  std::optional<double> ratio;  // empty: Delta a' == 0, O and S lines are not driven

  bool has_os_coupling() const { return ratio.has_value(); }
  /// Amplitude factor applied to O and S lines, 1/N (0 without coupling).
  double os_amplitude_scale() const { return ratio ? 1.0 / *ratio : 0.0; }
  /// N^2: ratio of Q to O/S anti-Stokes field strength after pump and probe.
  std::optional<double> intensity_ratio() const;

  static BranchingRatio fixed(double n);
  /// Q branch only.
  static BranchingRatio q_only() { return {}; }
};

/// N = (a'_perp + Delta a' <cos^2>_{J,J}) / (Delta a' <cos^2>_{J,J+-2}),
/// with the 2D-rotator estimates <cos^2> = 1/2 and 1/4.
BranchingRatio branching_ratio(const PolarizabilityDerivatives& p);

/// Q(J), S(J) for every J of the ensemble, and O(J) for J >= 2. Amplitudes are
/// set to the thermal weight until assign_amplitudes is called.
LineTable enumerate_lines(const ThermalEnsemble& ens, const SpectroscopicConstants& consts, int v1 = 1);

/// Options for the interpolation check of assign_amplitudes.
struct AmplitudeOptions {
  /// Max |linear - quadratic| interpolation difference relative to max |A2|.
  double interpolation_tolerance = 1e-6;
};

/// amplitude = thermal_weight * b * A2(nu_line), b = 1 (Q) or 1/N (O, S).
///
/// Throws OutOfBandError naming the first line outside the A2 grid, and
/// ResolutionError if linear interpolation of A2 is not accurate enough.
LineTable assign_amplitudes(const LineTable& lines, const TwoPhotonSpectrum& a2, const BranchingRatio& ratio,
                            const AmplitudeOptions& opts = {});

/// Same with an explicit N; N = +inf leaves only the Q branch.
LineTable assign_amplitudes(const LineTable& lines, const TwoPhotonSpectrum& a2, double ratio,
                            const AmplitudeOptions& opts = {});

/// Sorted union of per-line stencils [nu - half_width, nu + half_width] at the
/// given step: a grid on which A2 can be sampled for amplitude assignment.
std::vector<double> line_sampling_grid(const LineTable& lines, double half_width_cm1 = 0.75,
                                       double step_cm1 = 0.025);

std::string describe(const RamanLine& line);

}  // namespace rovib
