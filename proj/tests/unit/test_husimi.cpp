#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rovib/errors.hpp"
#include "rovib/husimi.hpp"
#include "rovib/pulses.hpp"

using namespace rovib;

namespace {

std::vector<Pulse> pair(double chirp) {
  return {Pulse{12500.0, 130.0, chirp, 0.0, 1.0}, Pulse{10183.0, 130.0, chirp, 0.0, 1.0}};
}

HusimiMap single(const Pulse& p, std::size_t n = 200) {
  const std::vector<Pulse> one{p};
  const double w = default_window_fwhm(one);
  return husimi_map(one, w, default_husimi_axes(one, w, n, n));
}

}  // namespace

TEST(Husimi, IntegralEqualsFieldEnergy) {
  const auto pulses = pair(0.0);
  const double w = default_window_fwhm(pulses);
  EXPECT_EQ(w, 130.0);
  const auto map = husimi_map(pulses, w, default_husimi_axes(pulses, w, 200, 400));
  const double energy = field_energy(pulses[0]) + field_energy(pulses[1]);
  EXPECT_NEAR(map.total(), energy, 2e-3 * energy);
}

TEST(Husimi, ChirpedIntegralIsPreserved) {
  Pulse p{12500.0, 130.0, 35000.0, 150.0, 1.3};
  const auto map = single(p);
  EXPECT_NEAR(map.total(), field_energy(p), 2e-3 * field_energy(p));
}

TEST(Husimi, TransformLimitedPulseHasNoTilt) {
  const auto map = single(Pulse{12500.0, 130.0, 0.0, 0.0, 1.0});
  EXPECT_NEAR(map.tilt(), 0.0, 1e-9);
  EXPECT_NEAR(map.ridge_slope(), 0.0, 1e-9);
}

TEST(Husimi, RidgeFollowsWindowedSweepRate) {
  for (double chirp : {20000.0, 35000.0, -35000.0, 60000.0}) {
    const Pulse p{12500.0, 130.0, chirp, 0.0, 1.0};
    const auto map = single(p, 256);
    // The window adds its own duration to the time spread of the map, which
    // flattens the ridge by T^2 / (T^2 + W^2).
    const double t2 = std::pow(chirped_duration_fs(p), 2);
    const double expected = sweep_rate_cm1_per_fs(p) * t2 / (t2 + map.window_fwhm_fs() * map.window_fwhm_fs());
    EXPECT_NEAR(map.ridge_slope(), expected, 0.01 * std::abs(expected)) << "chirp " << chirp;
    EXPECT_EQ(std::signbit(map.tilt()), std::signbit(chirp));
    EXPECT_GT(std::abs(map.tilt()), 0.5);
  }
}

TEST(Husimi, MapIsNonNegativeAndPeaksAtPulse) {
  const Pulse p{12500.0, 130.0, 0.0, 200.0, 1.0};
  const auto map = single(p, 101);
  double best = -1.0;
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < map.frequency_cm1().size(); ++i) {
    for (std::size_t j = 0; j < map.time_fs().size(); ++j) {
      ASSERT_GE(map.at(i, j), 0.0);
      if (map.at(i, j) > best) {
        best = map.at(i, j);
        bi = i;
        bj = j;
      }
    }
  }
  const double dt = map.time_fs()[1] - map.time_fs()[0];
  const double dnu = map.frequency_cm1()[1] - map.frequency_cm1()[0];
  EXPECT_NEAR(map.frequency_cm1()[bi], 12500.0, dnu);
  EXPECT_NEAR(map.time_fs()[bj], 200.0, dt);
}

TEST(Husimi, TwoPhotonFieldMap) {
  const auto pulses = pair(35000.0);
  const auto a2 = two_photon_spectrum(pulses[0], pulses[1], uniform_grid(2100, 2540, 0.25));
  const auto map = husimi_map(a2, 130.0, default_husimi_axes(a2, 130.0, 200, 200));
  EXPECT_NEAR(map.total(), a2.energy(), 5e-3 * a2.energy());
  // Equal chirps cancel in the difference frequency: no residual sweep.
  EXPECT_LT(std::abs(map.tilt()), 0.05);
}

TEST(Husimi, Validation) {
  const auto pulses = pair(0.0);
  const auto axes = default_husimi_axes(pulses, 130.0, 16, 16);
  EXPECT_THROW(husimi_map(pulses, 0.0, axes), DomainError);
  EXPECT_THROW(husimi_map(std::vector<Pulse>{}, 130.0, axes), DomainError);
  EXPECT_THROW(husimi_map(pulses, 130.0, HusimiAxes{{}, {1.0}}), DomainError);
}

TEST(Husimi, RidgeApproachesSweepRateForStrongChirp) {
  const Pulse p{12500.0, 130.0, 200000.0, 0.0, 1.0};
  const auto map = single(p, 256);
  EXPECT_NEAR(map.ridge_slope(), sweep_rate_cm1_per_fs(p), 0.01 * sweep_rate_cm1_per_fs(p));
}
