#pragma once

#include <numbers>

// Spectroscopic quantities are wavenumbers in cm^-1. Dynamics run in ps,
// pulse shapes in fs. A wavenumber nu accumulates phase 2*pi*c*nu*t.
namespace rovib::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Speed of light in cm/ps.
inline constexpr double kLightCmPerPs = 0.0299792458;
/// Speed of light in cm/fs.
inline constexpr double kLightCmPerFs = 2.99792458e-5;
/// hc/k in cm K.
inline constexpr double kSecondRadiation = 1.4387769;

/// Angular frequency (rad/ps) of a wavenumber in cm^-1.
constexpr double angular_per_ps(double wavenumber) { return kTwoPi * kLightCmPerPs * wavenumber; }
/// Angular frequency (rad/fs) of a wavenumber in cm^-1.
constexpr double angular_per_fs(double wavenumber) { return kTwoPi * kLightCmPerFs * wavenumber; }

/// Transform-limited Gaussian time-bandwidth product (intensity FWHMs), 2 ln2 / pi.
inline constexpr double kGaussianTimeBandwidth = 2.0 * std::numbers::ln2 / std::numbers::pi;

/// FWHM of exp(-x^2 / (2 sigma^2)) in units of sigma.
inline constexpr double kFwhmPerSigma = 2.3548200450309493;

}  // namespace rovib::units
