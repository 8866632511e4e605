#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "rovib/excitation.hpp"

namespace rovib {

/// Collisional decay of the coherence amplitude, exp(-t / tau_c).
/// The detected intensity therefore decays as exp(-2 t / tau_c).
struct DecayModel {
  std::optional<double> tau_c_ps;

  static DecayModel none() { return {}; }
  /// Throws DomainError unless tau_c > 0.
  static DecayModel collisional(double tau_c_ps);

  double factor(double t_ps) const { return tau_c_ps ? std::exp(-t_ps / *tau_c_ps) : 1.0; }
};

/// Sum over lines of amplitude * exp(-i 2 pi c (nu - nu_ref) t) * decay(t),
/// nu_ref = lines.info.frame_cm1. Lines are summed in table order.
std::complex<double> coherence_at(const LineTable& lines, const DecayModel& decay, double t_ps);

struct TraceGrid {
  double t0_ps = 0.0;
  double t1_ps = 1100.0;
  double dt_ps = 0.5;
  /// Gaussian probe smearing of the detected signal; none by default.
  std::optional<double> probe_fwhm_fs;

  std::size_t size() const;
  double time(std::size_t i) const { return t0_ps + static_cast<double>(i) * dt_ps; }
};

/// Sampled rotating-frame coherence and detected signal.
///
/// Without probe smearing signal[i] == |rho[i]|^2 exactly; with it, signal is
/// |rho|^2 convolved with the normalized probe Gaussian.
struct CoherenceTrace {
  std::vector<double> times;
  std::vector<std::complex<double>> rho;
  std::vector<double> signal;
  /// The common factor exp(-i 2 pi c frame t) is removed from rho.
  double frame_cm1 = 0.0;
  DecayModel decay;
  std::optional<double> probe_fwhm_fs;
  std::vector<std::string> warnings;

  bool aliased() const { return !warnings.empty(); }
  std::size_t size() const { return times.size(); }
};

/// Throws DomainError unless t1 > t0 >= 0 and dt > 0.
CoherenceTrace signal_trace(const LineTable& lines, const DecayModel& decay, const TraceGrid& grid);

/// Fastest beat period among the lines, 1 / (c * (nu_max - nu_min)), ps.
/// Infinite for fewer than two distinct lines.
double fastest_beat_period_ps(const LineTable& lines);

/// Convolution with a unit-area Gaussian of the given FWHM on a uniform grid;
/// the kernel is renormalized where it runs past the ends.
std::vector<double> gaussian_smooth(const std::vector<double>& values, double step, double fwhm);

}  // namespace rovib
