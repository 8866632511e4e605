#pragma once

#include <span>
#include <vector>

#include "rovib/pulses.hpp"

namespace rovib {

struct HusimiAxes {
  std::vector<double> time_fs;        // uniform
  std::vector<double> frequency_cm1;  // uniform
};

/// Gaussian-window time-frequency distribution, values[i_freq * n_time + i_time].
///
/// Normalized so that the integral over time (fs) and frequency (cm^-1) equals
/// the spectral field energy.
class HusimiMap {
public:
  HusimiMap(HusimiAxes axes, std::vector<double> values, double window_fwhm_fs);

  std::span<const double> time_fs() const { return axes_.time_fs; }
  std::span<const double> frequency_cm1() const { return axes_.frequency_cm1; }
  std::span<const double> values() const { return values_; }
  double at(std::size_t i_freq, std::size_t i_time) const { return values_[i_freq * axes_.time_fs.size() + i_time]; }
  double window_fwhm_fs() const { return window_fwhm_fs_; }

  /// Rectangle-rule integral over both axes.
  double total() const;
  /// Correlation coefficient of t and nu under the map density.
  double tilt() const;
  /// Slope (cm^-1/fs) of the mass-weighted regression of column centroids on time,
  /// over columns holding at least 1e-3 of the largest column mass.
  double ridge_slope() const;

private:
  HusimiAxes axes_;
  std::vector<double> values_;
  double window_fwhm_fs_;
};

/// Window matched to the shortest transform-limited pulse of the set.
double default_window_fwhm(std::span<const Pulse> pulses);

HusimiAxes default_husimi_axes(std::span<const Pulse> pulses, double window_fwhm_fs, std::size_t n_time = 256,
                               std::size_t n_freq = 256);
HusimiAxes default_husimi_axes(const TwoPhotonSpectrum& spectrum, double window_fwhm_fs, std::size_t n_time = 256,
                               std::size_t n_freq = 256);

/// Incoherent sum of the single-pulse maps. Throws DomainError for window <= 0.
HusimiMap husimi_map(std::span<const Pulse> pulses, double window_fwhm_fs, const HusimiAxes& axes);

/// Map of the difference-frequency field whose spectrum is A2.
HusimiMap husimi_map(const TwoPhotonSpectrum& spectrum, double window_fwhm_fs, const HusimiAxes& axes);

}  // namespace rovib
