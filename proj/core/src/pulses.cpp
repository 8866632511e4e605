#include "rovib/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rovib/errors.hpp"
#include "rovib/parallel.hpp"
#include "rovib/units.hpp"

namespace rovib {

namespace {

constexpr double kRadPerFsPerCm1 = units::kTwoPi * units::kLightCmPerFs;

}  // namespace

void validate(const Pulse& p) {
  if (!std::isfinite(p.center_cm1) || !std::isfinite(p.chirp_fs2) || !std::isfinite(p.delay_fs) ||
      !std::isfinite(p.amplitude)) {
    throw DomainError("pulse parameters must be finite");
  }
  if (!(p.fwhm_fs > 0.0)) throw DomainError("pulse duration must be > 0 fs");
}

double spectral_intensity_fwhm_cm1(const Pulse& p) {
  return units::kGaussianTimeBandwidth / (p.fwhm_fs * units::kLightCmPerFs);
}

double spectral_sigma_cm1(const Pulse& p) {
  // |E|^2 = exp(-x^2 / sigma^2) has FWHM 2 sigma sqrt(ln 2).
  return spectral_intensity_fwhm_cm1(p) / (2.0 * std::sqrt(std::numbers::ln2));
}

double chirped_duration_fs(const Pulse& p) {
  const double r = 4.0 * std::numbers::ln2 * p.chirp_fs2 / (p.fwhm_fs * p.fwhm_fs);
  return p.fwhm_fs * std::sqrt(1.0 + r * r);
}

double sweep_rate_cm1_per_fs(const Pulse& p) {
  // Group delay chirp * u + delay; inverting gives u(t) = (t - delay) / chirp.
  // Exact only in the strongly chirped limit; the Gaussian correction is
  // 1 / (1 + (tau0^2 / (4 ln2 chirp))^2) and is applied here.
  if (p.chirp_fs2 == 0.0) return 0.0;
  const double tau0sq = p.fwhm_fs * p.fwhm_fs / (4.0 * std::numbers::ln2);
  const double q = tau0sq / p.chirp_fs2;
  return 1.0 / (p.chirp_fs2 * kRadPerFsPerCm1) / (1.0 + q * q);
}

double field_energy(const Pulse& p) {
  return p.amplitude * p.amplitude * spectral_sigma_cm1(p) * std::sqrt(units::kPi);
}

std::complex<double> spectral_amplitude(const Pulse& p, double omega_cm1) {
  const double x = omega_cm1 - p.center_cm1;
  const double sigma = spectral_sigma_cm1(p);
  const double u = kRadPerFsPerCm1 * x;
  const double envelope = p.amplitude * std::exp(-x * x / (2.0 * sigma * sigma));
  return std::polar(envelope, 0.5 * p.chirp_fs2 * u * u + u * p.delay_fs);
}

// --- TwoPhotonSpectrum -------------------------------------------------------

TwoPhotonSpectrum::TwoPhotonSpectrum(std::vector<double> grid, std::vector<std::complex<double>> amplitude)
    : grid_(std::move(grid)), amplitude_(std::move(amplitude)) {
  if (grid_.size() != amplitude_.size()) throw DomainError("two-photon grid and amplitude sizes differ");
  if (grid_.size() < 2) throw DomainError("two-photon spectrum needs at least two grid points");
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    if (!(grid_[i] > grid_[i - 1])) throw DomainError("two-photon grid must be strictly increasing");
  }
}

TwoPhotonSpectrum TwoPhotonSpectrum::flat(double lo, double hi) {
  return TwoPhotonSpectrum({lo, hi}, {1.0, 1.0});
}

bool TwoPhotonSpectrum::covers(double omega_cm1) const {
  return !grid_.empty() && omega_cm1 >= grid_.front() && omega_cm1 <= grid_.back();
}

std::size_t TwoPhotonSpectrum::bracket(double omega_cm1) const {
  if (!covers(omega_cm1)) {
    throw OutOfBandError("Raman shift " + std::to_string(omega_cm1) + " cm^-1 is outside the two-photon grid");
  }
  auto it = std::upper_bound(grid_.begin(), grid_.end(), omega_cm1);
  std::size_t i = static_cast<std::size_t>(it - grid_.begin());
  return std::clamp<std::size_t>(i, 1, grid_.size() - 1) - 1;
}

std::complex<double> TwoPhotonSpectrum::at(double omega_cm1) const {
  const std::size_t i = bracket(omega_cm1);
  const double f = (omega_cm1 - grid_[i]) / (grid_[i + 1] - grid_[i]);
  return amplitude_[i] + f * (amplitude_[i + 1] - amplitude_[i]);
}

std::complex<double> TwoPhotonSpectrum::at_quadratic(double omega_cm1) const {
  if (grid_.size() < 3) return at(omega_cm1);
  std::size_t i = bracket(omega_cm1);
  // Choose the three nodes closest to the query.
  if (i + 2 >= grid_.size()) {
    i = grid_.size() - 3;
  } else if (i > 0 && omega_cm1 - grid_[i] < grid_[i + 1] - omega_cm1) {
    i -= 1;
  }
  const double x0 = grid_[i], x1 = grid_[i + 1], x2 = grid_[i + 2];
  const double x = omega_cm1;
  const double l0 = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
  return l0 * amplitude_[i] + l1 * amplitude_[i + 1] + l2 * amplitude_[i + 2];
}

double TwoPhotonSpectrum::peak_modulus() const {
  double m = 0.0;
  for (const auto& a : amplitude_) m = std::max(m, std::abs(a));
  return m;
}

double TwoPhotonSpectrum::peak_position() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < amplitude_.size(); ++i) {
    if (std::abs(amplitude_[i]) > std::abs(amplitude_[best])) best = i;
  }
  return grid_[best];
}

double TwoPhotonSpectrum::power_fwhm() const {
  std::size_t peak = 0;
  for (std::size_t i = 1; i < amplitude_.size(); ++i) {
    if (std::norm(amplitude_[i]) > std::norm(amplitude_[peak])) peak = i;
  }
  const double half = 0.5 * std::norm(amplitude_[peak]);
  if (half == 0.0) return 0.0;

  std::size_t lo = peak;
  while (lo > 0 && std::norm(amplitude_[lo - 1]) >= half) --lo;
  std::size_t hi = peak;
  while (hi + 1 < amplitude_.size() && std::norm(amplitude_[hi + 1]) >= half) ++hi;
  if (lo == 0 || hi + 1 == amplitude_.size()) {
    throw ResolutionError("two-photon grid does not contain both half-power crossings");
  }
  auto cross = [&](std::size_t inside, std::size_t outside) {
    const double a = std::norm(amplitude_[inside]);
    const double b = std::norm(amplitude_[outside]);
    return grid_[inside] + (a - half) / (a - b) * (grid_[outside] - grid_[inside]);
  };
  return cross(hi, hi + 1) - cross(lo, lo - 1);
}

double TwoPhotonSpectrum::power_centroid() const {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double w = std::norm(amplitude_[i]);
    num += w * grid_[i];
    den += w;
  }
  if (den == 0.0) throw DomainError("two-photon spectrum is identically zero");
  return num / den;
}

double TwoPhotonSpectrum::energy() const {
  double e = 0.0;
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    e += 0.5 * (std::norm(amplitude_[i]) + std::norm(amplitude_[i - 1])) * (grid_[i] - grid_[i - 1]);
  }
  return e;
}

TwoPhotonSpectrum TwoPhotonSpectrum::normalized() const {
  const double peak = peak_modulus();
  if (peak == 0.0) throw DomainError("cannot normalize a zero two-photon spectrum");
  std::vector<std::complex<double>> a(amplitude_);
  for (auto& v : a) v /= peak;
  return TwoPhotonSpectrum(grid_, std::move(a));
}

// --- quadrature --------------------------------------------------------------

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw DomainError("uniform grid needs hi >= lo and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + static_cast<double>(i) * step;
  return g;
}

TwoPhotonSpectrum two_photon_spectrum(const Pulse& pump, const Pulse& stokes, std::span<const double> grid,
                                      const TwoPhotonOptions& opts) {
  validate(pump);
  validate(stokes);
  if (opts.points_per_fwhm < 16.0) throw ResolutionError("two-photon quadrature needs >= 16 points per FWHM");
  if (grid.size() < 2) throw DomainError("two-photon grid needs at least two points");

  const double sp = spectral_sigma_cm1(pump);
  const double ss = spectral_sigma_cm1(stokes);
  const double fwhm = std::min(spectral_intensity_fwhm_cm1(pump), spectral_intensity_fwhm_cm1(stokes));
  double h = fwhm / opts.points_per_fwhm;

  // Keep the phase advance per node below pi/4 at the edges of the integration window.
  const double k = kRadPerFsPerCm1;
  const double phase_rate = k * k * (std::abs(pump.chirp_fs2) * opts.span_sigmas * sp +
                                     std::abs(stokes.chirp_fs2) * opts.span_sigmas * ss) +
                            k * (std::abs(pump.delay_fs) + std::abs(stokes.delay_fs));
  if (phase_rate > 0.0) h = std::min(h, 0.25 * units::kPi / phase_rate);

  const double lo_p = pump.center_cm1 - opts.span_sigmas * sp;
  const double hi_p = pump.center_cm1 + opts.span_sigmas * sp;

  std::vector<std::complex<double>> coarse(grid.size()), fine(grid.size());
  parallel_for(grid.size(), [&](std::size_t g) {
    const double shift = grid[g];
    const double lo = std::max(lo_p, stokes.center_cm1 + shift - opts.span_sigmas * ss);
    const double hi = std::min(hi_p, stokes.center_cm1 + shift + opts.span_sigmas * ss);
    if (!(hi > lo)) {
      coarse[g] = fine[g] = 0.0;
      return;
    }
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / h));
    const double step = (hi - lo) / static_cast<double>(n);
    auto integrand = [&](double w) {
      return spectral_amplitude(pump, w) * std::conj(spectral_amplitude(stokes, w - shift));
    };
    std::complex<double> even = 0.5 * (integrand(lo) + integrand(hi));
    for (std::size_t i = 1; i < n; ++i) even += integrand(lo + static_cast<double>(i) * step);
    std::complex<double> odd = 0.0;
    for (std::size_t i = 0; i < n; ++i) odd += integrand(lo + (static_cast<double>(i) + 0.5) * step);
    coarse[g] = even * step;
    fine[g] = (even + odd) * (0.5 * step);
  });

  double scale = 0.0, worst = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    scale = std::max(scale, std::abs(fine[g]));
    worst = std::max(worst, std::abs(fine[g] - coarse[g]));
  }
  if (scale > 0.0 && worst > opts.self_check_tolerance * scale) {
    throw ResolutionError("two-photon quadrature not converged: step halving changed A2 by " +
                          std::to_string(worst / scale) + " (relative)");
  }
  return TwoPhotonSpectrum(std::vector<double>(grid.begin(), grid.end()), std::move(fine));
}

double stokes_delay_for_center(const Pulse& pump, const Pulse& stokes, double target_cm1,
                               const TwoPhotonOptions& opts) {
  // Search window: the transform-limited envelope around the carrier difference.
  const double tl_width = std::sqrt(2.0) * std::max(spectral_intensity_fwhm_cm1(pump),
                                                    spectral_intensity_fwhm_cm1(stokes));
  const double carrier = pump.center_cm1 - stokes.center_cm1;
  const double lo = std::min(carrier, target_cm1) - 3.0 * tl_width;
  const double hi = std::max(carrier, target_cm1) + 3.0 * tl_width;
  const auto grid = uniform_grid(lo, hi, tl_width / 128.0);

  auto centroid = [&](double delay) {
    Pulse s = stokes;
    s.delay_fs = delay;
    return two_photon_spectrum(pump, s, grid, opts).power_centroid();
  };

  const double probe = 100.0;
  double d = stokes.delay_fs;
  double c0 = centroid(d);
  const double slope = (centroid(d + probe) - c0) / probe;
  if (std::abs(slope) < 1e-9) {
    throw DomainError("Stokes delay does not move the two-photon spectrum (pulses are unchirped)");
  }
  for (int iter = 0; iter < 4 && std::abs(c0 - target_cm1) > 1e-6; ++iter) {
    d += (target_cm1 - c0) / slope;
    c0 = centroid(d);
  }
  return d;
}

}  // namespace rovib
