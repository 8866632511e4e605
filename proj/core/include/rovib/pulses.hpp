#pragma once

#include <complex>
#include <span>
#include <vector>

namespace rovib {

/// Gaussian laser pulse with quadratic spectral phase.
///
/// The spectral field is
///   amplitude * exp(-(w - w0)^2 / (2 sigma^2)) * exp(i [chirp/2 u^2 + u delay]),
/// u = 2 pi c (w - w0) in rad/fs, with sigma chosen so that the
/// transform-limited intensity FWHM in time equals fwhm_fs. A positive chirp
/// sweeps the instantaneous frequency upward in time.
struct Pulse {
  double center_cm1 = 0.0;
  double fwhm_fs = 130.0;
  double chirp_fs2 = 0.0;
  double delay_fs = 0.0;
  double amplitude = 1.0;
};

/// Throws DomainError unless fwhm_fs > 0 and the numbers are finite.
void validate(const Pulse& p);

/// sigma of the spectral amplitude Gaussian, cm^-1.
double spectral_sigma_cm1(const Pulse& p);
/// FWHM of |E(w)|^2, cm^-1.
double spectral_intensity_fwhm_cm1(const Pulse& p);
/// Intensity FWHM in time after chirping (analytic), fs.
double chirped_duration_fs(const Pulse& p);
/// Instantaneous-frequency sweep rate d(nu)/dt of the chirped pulse, cm^-1/fs.
/// Zero for a transform-limited pulse.
double sweep_rate_cm1_per_fs(const Pulse& p);
/// Spectral energy, integral of |E(w)|^2 dw over cm^-1.
double field_energy(const Pulse& p);

std::complex<double> spectral_amplitude(const Pulse& p, double omega_cm1);

/// Complex difference-frequency excitation amplitude A2 sampled on a sorted grid
/// of Raman shifts (cm^-1).
class TwoPhotonSpectrum {
public:
  TwoPhotonSpectrum() = default;
  /// Grid must be strictly increasing with at least two points.
  TwoPhotonSpectrum(std::vector<double> grid, std::vector<std::complex<double>> amplitude);

  /// A2 == 1 on [lo, hi].
  static TwoPhotonSpectrum flat(double lo, double hi);

  std::span<const double> grid() const { return grid_; }
  std::span<const std::complex<double>> amplitude() const { return amplitude_; }
  std::size_t size() const { return grid_.size(); }
  bool covers(double omega_cm1) const;

  /// Linear interpolation. Throws OutOfBandError outside the grid.
  std::complex<double> at(double omega_cm1) const;
  /// Three-point (quadratic) interpolation; used to bound the linear error.
  std::complex<double> at_quadratic(double omega_cm1) const;

  double peak_modulus() const;
  /// Grid point of max |A2|.
  double peak_position() const;
  /// FWHM of |A2|^2 around its peak, by linear interpolation of the crossings.
  double power_fwhm() const;
  /// First moment of |A2|^2.
  double power_centroid() const;
  /// Trapezoidal integral of |A2|^2.
  double energy() const;
  /// Copy scaled so that max |A2| = 1.
  TwoPhotonSpectrum normalized() const;

private:
  std::size_t bracket(double omega_cm1) const;

  std::vector<double> grid_;
  std::vector<std::complex<double>> amplitude_;
};

struct TwoPhotonOptions {
  /// Quadrature nodes per intensity FWHM of the narrower pulse (at least 16).
  double points_per_fwhm = 32.0;
  /// Integration half-width in spectral sigmas of each pulse.
  double span_sigmas = 9.0;
  /// Max |A(h) - A(h/2)| relative to max |A(h/2)|.
  double self_check_tolerance = 1e-4;
};

/// A2(W) = integral E_pump(w) conj(E_stokes(w - W)) dw.
///
/// Evaluated by the composite rule at step h and h/2; throws ResolutionError
/// when the two disagree by more than the self-check tolerance. Grid points
/// are evaluated independently, so the result does not depend on threading.
TwoPhotonSpectrum two_photon_spectrum(const Pulse& pump, const Pulse& stokes, std::span<const double> grid,
                                      const TwoPhotonOptions& opts = {});

/// lo, lo+step, ..., up to and including hi (within 1e-9 step).
std::vector<double> uniform_grid(double lo, double hi, double step);

/// Stokes delay (fs) that puts the |A2|^2 centroid at target_cm1.
///
/// Only meaningful for chirped pulses; throws DomainError when the delay does
/// not move the spectrum.
double stokes_delay_for_center(const Pulse& pump, const Pulse& stokes, double target_cm1,
                               const TwoPhotonOptions& opts = {});

}  // namespace rovib
