#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>

#include "rovib/errors.hpp"
#include "rovib/pulses.hpp"
#include "rovib/units.hpp"
#include "support.hpp"

using namespace rovib;
using rovib::testing::Gen;

namespace {

/// Closed-form difference-frequency amplitude of two chirped Gaussian pulses,
/// integral exp(-a x^2 + b x + c0) dx over the pump detuning x.
std::complex<double> analytic_a2(const Pulse& p, const Pulse& s, double shift) {
  using cd = std::complex<double>;
  const double k = 2.0 * std::numbers::pi * 2.99792458e-5;
  const double sp = spectral_sigma_cm1(p), ss = spectral_sigma_cm1(s);
  const double d = shift - (p.center_cm1 - s.center_cm1);
  const cd i(0.0, 1.0);
  const cd a = 1.0 / (2 * sp * sp) + 1.0 / (2 * ss * ss) - i * k * k * (p.chirp_fs2 - s.chirp_fs2) / 2.0;
  const cd b = d / (ss * ss) + i * k * (p.delay_fs - s.delay_fs) + i * s.chirp_fs2 * k * k * d;
  const cd c0 = -d * d / (2 * ss * ss) - i * s.chirp_fs2 * k * k * d * d / 2.0 + i * k * d * s.delay_fs;
  return p.amplitude * s.amplitude * std::sqrt(std::numbers::pi / a) * std::exp(b * b / (4.0 * a) + c0);
}

Pulse pump(double chirp = 0.0) { return Pulse{12500.0, 130.0, chirp, 0.0, 1.0}; }
Pulse stokes(double chirp = 0.0) { return Pulse{10183.0, 130.0, chirp, 0.0, 1.0}; }

}  // namespace

TEST(Pulse, SpectralWidths) {
  const auto p = pump();
  const double fwhm = units::kGaussianTimeBandwidth / (130.0 * units::kLightCmPerFs);
  EXPECT_NEAR(spectral_intensity_fwhm_cm1(p), fwhm, 1e-12);
  EXPECT_NEAR(spectral_intensity_fwhm_cm1(p), 113.2248, 1e-3);
  // |E|^2 = exp(-x^2 / sigma^2) falls to one half at the FWHM edges.
  const double half = spectral_intensity_fwhm_cm1(p) / 2.0;
  EXPECT_NEAR(std::norm(spectral_amplitude(p, p.center_cm1 + half)), 0.5, 1e-12);
}

TEST(Pulse, ChirpedDurationAndSweep) {
  const auto p = pump(35000.0);
  const double r = 4.0 * std::numbers::ln2 * 35000.0 / (130.0 * 130.0);
  EXPECT_NEAR(chirped_duration_fs(p), 130.0 * std::sqrt(1 + r * r), 1e-9);
  EXPECT_EQ(sweep_rate_cm1_per_fs(pump()), 0.0);
  EXPECT_GT(sweep_rate_cm1_per_fs(p), 0.0);
  EXPECT_LT(sweep_rate_cm1_per_fs(pump(-35000.0)), 0.0);
}

TEST(Pulse, FieldEnergyMatchesQuadrature) {
  Pulse p = pump(20000.0);
  p.amplitude = 1.7;
  double sum = 0.0;
  const double h = 0.05;
  for (double x = -800; x <= 800; x += h) sum += std::norm(spectral_amplitude(p, p.center_cm1 + x)) * h;
  EXPECT_NEAR(sum, field_energy(p), 1e-9 * field_energy(p));
}

TEST(Pulse, Validation) {
  EXPECT_THROW(validate(Pulse{12500.0, 0.0, 0.0, 0.0, 1.0}), DomainError);
  EXPECT_THROW(validate(Pulse{12500.0, 130.0, std::nan(""), 0.0, 1.0}), DomainError);
  EXPECT_NO_THROW(validate(pump(-1000.0)));
}

TEST(TwoPhoton, TransformLimitedWidth) {
  const auto a2 = two_photon_spectrum(pump(), stokes(), uniform_grid(1900, 2760, 0.25));
  // Difference-frequency |A2|^2 is sqrt(2) wider than a single-pulse spectrum.
  EXPECT_NEAR(a2.power_fwhm(), std::sqrt(2.0) * spectral_intensity_fwhm_cm1(pump()), 0.01);
  EXPECT_NEAR(a2.power_centroid(), 12500.0 - 10183.0, 1e-6);
}

TEST(TwoPhoton, EqualChirpNarrowing) {
  const double alpha = 35000.0;
  const auto tl = two_photon_spectrum(pump(), stokes(), uniform_grid(1900, 2760, 0.1));
  const auto ch = two_photon_spectrum(pump(alpha), stokes(alpha), uniform_grid(2200, 2440, 0.02));
  const double k = 2.0 * std::numbers::pi * units::kLightCmPerFs;
  const double sigma = spectral_sigma_cm1(pump());
  const double expected = std::sqrt(1.0 + std::pow(alpha * k * k * sigma * sigma, 2));
  EXPECT_NEAR(tl.power_fwhm() / ch.power_fwhm(), expected, 1e-3 * expected);
  EXPECT_NEAR(tl.power_fwhm() / ch.power_fwhm(), 5.8285, 1e-3);
}

// Property: the quadrature agrees with the closed form for random pulse pairs.
TEST(TwoPhotonProperty, MatchesClosedForm) {
  Gen gen(31);
  for (int trial = 0; trial < 25; ++trial) {
    Pulse p{gen.uniform(12000, 13000), gen.uniform(60, 300), gen.uniform(-40000, 40000), gen.uniform(-300, 300),
            gen.uniform(0.5, 2.0)};
    Pulse s{gen.uniform(9800, 10500), gen.uniform(60, 300), gen.uniform(-40000, 40000), gen.uniform(-300, 300),
            gen.uniform(0.5, 2.0)};
    const double c = p.center_cm1 - s.center_cm1;
    const auto grid = uniform_grid(c - 300.0, c + 300.0, 7.0);
    const auto a2 = two_photon_spectrum(p, s, grid);
    double peak = 0.0;
    for (double w : grid) peak = std::max(peak, std::abs(analytic_a2(p, s, w)));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ASSERT_LT(std::abs(a2.amplitude()[i] - analytic_a2(p, s, grid[i])), 1e-6 * peak)
          << "trial " << trial << " shift " << grid[i];
    }
  }
}

TEST(TwoPhoton, SelfCheckAndResolution) {
  TwoPhotonOptions opts;
  opts.points_per_fwhm = 8.0;
  EXPECT_THROW(two_photon_spectrum(pump(), stokes(), uniform_grid(2300, 2340, 1), opts), ResolutionError);
  opts = {};
  opts.self_check_tolerance = 1e-300;
  EXPECT_THROW(two_photon_spectrum(pump(30000), stokes(), uniform_grid(2300, 2340, 1), opts), ResolutionError);
  EXPECT_THROW(two_photon_spectrum(pump(), stokes(), std::vector<double>{2300.0}), DomainError);
}

TEST(TwoPhoton, ThreadCountDoesNotChangeBits) {
  const auto grid = uniform_grid(2000, 2600, 0.5);
  setenv("ROVIB_THREADS", "1", 1);
  const auto a = two_photon_spectrum(pump(35000), stokes(35000), grid);
  setenv("ROVIB_THREADS", "7", 1);
  const auto b = two_photon_spectrum(pump(35000), stokes(35000), grid);
  unsetenv("ROVIB_THREADS");
  for (std::size_t i = 0; i < grid.size(); ++i) ASSERT_EQ(a.amplitude()[i], b.amplitude()[i]);
}

TEST(TwoPhotonSpectrum, Interpolation) {
  const auto flat = TwoPhotonSpectrum::flat(2000.0, 2500.0);
  EXPECT_EQ(flat.at(2234.5), std::complex<double>(1.0, 0.0));
  EXPECT_TRUE(flat.covers(2000.0));
  EXPECT_FALSE(flat.covers(2500.1));
  EXPECT_THROW(flat.at(1999.0), OutOfBandError);

  TwoPhotonSpectrum quad({0.0, 1.0, 2.0, 3.0}, {{0.0, 0.0}, {1.0, 0.0}, {4.0, 0.0}, {9.0, 0.0}});
  EXPECT_DOUBLE_EQ(quad.at(1.5).real(), 2.5);
  EXPECT_NEAR(quad.at_quadratic(1.5).real(), 2.25, 1e-12);
  EXPECT_EQ(quad.peak_position(), 3.0);
  EXPECT_EQ(quad.normalized().peak_modulus(), 1.0);
  EXPECT_THROW(quad.power_fwhm(), ResolutionError);
  EXPECT_THROW(TwoPhotonSpectrum({0.0, 0.0}, {{1.0, 0.0}, {1.0, 0.0}}), DomainError);
}

TEST(TwoPhoton, CenteringByStokesDelay) {
  const double target = 2329.914655;
  const auto p = pump(35000), s0 = stokes(35000);
  Pulse s = s0;
  s.delay_fs = stokes_delay_for_center(p, s0, target);
  const auto a2 = two_photon_spectrum(p, s, uniform_grid(2150, 2510, 0.05));
  EXPECT_NEAR(a2.power_centroid(), target, 0.01);
  EXPECT_THROW(stokes_delay_for_center(pump(), stokes(), target), DomainError);
}

TEST(UniformGrid, IncludesEndpoint) {
  const auto g = uniform_grid(0.0, 1.0, 0.1);
  ASSERT_EQ(g.size(), 11u);
  EXPECT_NEAR(g.back(), 1.0, 1e-12);
  EXPECT_THROW(uniform_grid(1.0, 0.0, 0.1), DomainError);
}
