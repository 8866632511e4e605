#include "rovib/molmodel.hpp"

#include <cmath>
#include <string>

#include "rovib/errors.hpp"
#include "rovib/units.hpp"

namespace rovib {

namespace {

void require_level(int v, int j) {
  if (v < 0) throw DomainError("vibrational quantum number must be >= 0, got " + std::to_string(v));
  if (j < 0) throw DomainError("rotational quantum number must be >= 0, got " + std::to_string(j));
}

}  // namespace

bool SpectroscopicConstants::is_physical() const {
  return omega_e > 0.0 && b_e > 0.0 && d_e >= 0.0;
}

SpectroscopicConstants SpectroscopicConstants::with_gamma_e(double value) const {
  SpectroscopicConstants out = *this;
  out.gamma_e = value;
  return out;
}

SpectroscopicConstants SpectroscopicConstants::with_beta_e(double value) const {
  SpectroscopicConstants out = *this;
  out.beta_e = value;
  return out;
}

double vibrational_term(const SpectroscopicConstants& c, int v) {
  require_level(v, 0);
  const double h = v + 0.5;
  return c.omega_e * h - c.omega_e_xe * h * h + c.omega_e_ye * h * h * h;
}

RotationalConstants rotational_constants(const SpectroscopicConstants& c, int v) {
  require_level(v, 0);
  const double h = v + 0.5;
  return {c.b_e - c.alpha_e * h + c.gamma_e_value() * h * h, c.d_e + c.beta_e_value() * h};
}

double rotational_term(const SpectroscopicConstants& c, int v, int j) {
  require_level(v, j);
  const auto [b, d] = rotational_constants(c, v);
  const double x = static_cast<double>(j) * (j + 1);
  return b * x - d * x * x;
}

RoVibLevel make_level(const SpectroscopicConstants& c, int v, int j) {
  return {v, j, vibrational_term(c, v) + rotational_term(c, v, j)};
}

double band_origin(const SpectroscopicConstants& c, int v1) {
  return vibrational_term(c, v1) - vibrational_term(c, 0);
}

double transition_wavenumber(const SpectroscopicConstants& c, int j_lower, int j_upper, int v1) {
  if (j_lower < 0) throw DomainError("J_lower must be >= 0, got " + std::to_string(j_lower));
  if (j_upper < 0) {
    throw DomainError("no O-branch line from J=" + std::to_string(j_lower) + ": J_upper would be " +
                      std::to_string(j_upper));
  }
  const int dj = j_upper - j_lower;
  if (dj != -2 && dj != 0 && dj != 2) {
    throw DomainError("Raman transitions require J_upper - J_lower in {-2, 0, 2}, got " + std::to_string(dj));
  }
  // Vibrational and rotational parts are differenced separately so that the
  // large G terms cancel before the small rotational ones are added.
  return band_origin(c, v1) + (rotational_term(c, v1, j_upper) - rotational_term(c, 0, j_lower));
}

CharacteristicTimes characteristic_times(const SpectroscopicConstants& c, int v1, double thermal_spread) {
  if (thermal_spread <= 0.0) throw DomainError("thermal J spread must be > 0");
  const double b0 = rotational_constants(c, 0).b;
  const double dbv = rotational_constants(c, v1).b - b0;

  CharacteristicTimes out;
  out.rotational_revival_ps = 1.0 / (2.0 * units::kLightCmPerPs * b0);
  if (dbv != 0.0) {
    const double t = 1.0 / (2.0 * units::kLightCmPerPs * std::abs(dbv));
    out.rovib_revival_ps = t;
    out.dephasing_estimate_ps = t / (thermal_spread * thermal_spread);
  }
  return out;
}

SpectroscopicConstants n2_ground_state() {
  SpectroscopicConstants c;
  c.label = "N2_X";
  c.te = 0.0;
  c.omega_e = 2358.57;
  c.omega_e_xe = 14.324;
  c.omega_e_ye = -2.26e-3;
  c.b_e = 1.99824;
  c.alpha_e = 1.7318e-2;
  c.d_e = 5.76e-6;
  return c;
}

SpectroscopicConstants n2_a_state() {
  SpectroscopicConstants c;
  c.label = "N2_A";
  c.te = 50203.6;
  c.omega_e = 1460.64;
  c.omega_e_xe = 13.87;
  c.omega_e_ye = 0.0103;
  c.b_e = 1.4546;
  c.alpha_e = 0.018;
  c.gamma_e = -8.8e-5;
  c.d_e = 6.15e-6;
  return c;
}

}  // namespace rovib
