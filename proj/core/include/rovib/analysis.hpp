#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rovib/dynamics.hpp"

namespace rovib {

enum class ExtremumKind { Peak, Dip };

const char* kind_name(ExtremumKind k);

struct Extremum {
  /// Sample of the extremum of the smoothed signal.
  double time_ps = 0.0;
  ExtremumKind kind = ExtremumKind::Peak;
  double value = 0.0;
  double prominence = 0.0;
  /// Midpoint of the region around the extremum that lies within
  /// center_level of its depth, bounded by the neighbouring opposite extrema.
  /// Flat-bottomed anti-revival dips are located by this midpoint.
  double center_ps = 0.0;
};

struct ExtremaOptions {
  double smooth_fwhm_ps = 2.0;
  /// Minimum prominence as a fraction of the maximum smoothed signal.
  double min_prominence = 0.02;
  /// Depth fraction defining the region whose midpoint is center_ps.
  double center_level = 0.25;
};

/// Interior local maxima and minima of the Gaussian-smoothed signal with
/// sufficient topographic prominence, in time order.
std::vector<Extremum> detect_extrema(std::span<const double> times, std::span<const double> signal,
                                     const ExtremaOptions& opts = {});
std::vector<Extremum> detect_extrema(const CoherenceTrace& trace, const ExtremaOptions& opts = {});

struct Fraction {
  int p = 0;
  int q = 1;
  double value() const { return static_cast<double>(p) / q; }
  std::string str() const { return std::to_string(p) + "/" + std::to_string(q); }
};

struct RevivalEntry {
  double time_ps = 0.0;  // center estimate used for matching
  ExtremumKind kind = ExtremumKind::Peak;
  double prominence = 0.0;
  std::optional<Fraction> fraction;
  double match_error_ps = 0.0;  // time - p/q T when matched
};

struct RevivalReport {
  std::vector<RevivalEntry> entries;
  double revival_time_ps = 0.0;
  int q_max = 9;
  double tolerance_ps = 1.0;
  std::optional<double> dephasing_time_ps;
  /// Peak matched to 1/1, when present.
  std::optional<double> measured_revival_ps;
};

/// Matches each extremum to the nearest p/q T (p >= 1, q <= q_max, gcd 1);
/// ties go to the smaller q. Unmatched when farther than tol.
RevivalReport classify_fractions(std::span<const Extremum> extrema, double revival_time_ps, int q_max = 9,
                                 double tol_ps = 1.0);

/// First time the smoothed |rho| drops below |rho(t0)|/e and stays there for
/// at least hold_ps. Empty when never reached.
std::optional<double> dephasing_time(const CoherenceTrace& trace, double smooth_fwhm_ps = 2.0, double hold_ps = 1.0);
std::optional<double> dephasing_time(std::span<const double> times, std::span<const double> magnitude,
                                     double smooth_fwhm_ps = 2.0, double hold_ps = 1.0);

/// Fast structure riding on a slowly varying signal near a nominal time.
struct BurstFeature {
  double nominal_ps = 0.0;
  /// Largest |signal - smoothed signal| within the window.
  double amplitude = 0.0;
  /// Time centroid of (signal - smoothed signal)^2 within the window.
  double centroid_ps = 0.0;
};

/// Rotational bursts last well under a picosecond; slower beats are not counted.
inline constexpr double kBurstHighpassFwhmPs = 0.5;

/// Requires a uniform time grid. Throws DomainError when the window holds no samples.
BurstFeature measure_burst(std::span<const double> times, std::span<const double> signal, double nominal_ps,
                           double half_window_ps = 1.0, double highpass_fwhm_ps = kBurstHighpassFwhmPs);

}  // namespace rovib
