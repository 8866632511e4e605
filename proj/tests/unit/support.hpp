#pragma once

// Shared fixtures and hand-rolled generators for the unit tests.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "rovib/ensemble.hpp"
#include "rovib/excitation.hpp"
#include "rovib/molmodel.hpp"

namespace rovib::testing {

/// Deterministic generator; each property test seeds its own.
class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal(double sigma) { return std::normal_distribution<double>(0.0, sigma)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  /// Nitrogen-like constants perturbed by up to +-20 %.
  SpectroscopicConstants constants() {
    auto c = n2_ground_state();
    c.label = "random";
    c.omega_e *= uniform(0.8, 1.2);
    c.omega_e_xe *= uniform(0.8, 1.2);
    c.b_e *= uniform(0.8, 1.2);
    c.alpha_e *= uniform(0.8, 1.2);
    c.gamma_e = uniform(-5e-5, 5e-5);
    c.d_e *= uniform(0.8, 1.2);
    c.beta_e = coin() ? 0.0 : uniform(-1e-8, 1e-8);
    return c;
  }

  std::mt19937_64& engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

/// N2 ground state with the fitted gamma_e and beta_e = 0.
inline SpectroscopicConstants n2_fitted() {
  auto c = n2_ground_state();
  c.gamma_e = kN2FittedGammaE;
  c.beta_e = 0.0;
  return c;
}

/// Lines driven by a flat excitation spectrum, so amplitudes equal thermal
/// weights (Q) or weights / N (O, S).
inline LineTable flat_lines(const SpectroscopicConstants& c, double temperature_k, const BranchingRatio& ratio,
                            SpinWeights spin = {}) {
  const auto ens = build_ensemble(temperature_k, rotational_constants(c, 0).b, spin);
  return assign_amplitudes(enumerate_lines(ens, c, 1), TwoPhotonSpectrum::flat(1000.0, 4000.0), ratio);
}

inline double revival_time(const SpectroscopicConstants& c) {
  return *characteristic_times(c, 1, 1.0).rovib_revival_ps;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rovib_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace rovib::testing
