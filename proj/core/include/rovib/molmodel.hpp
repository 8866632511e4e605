#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rovib {

/// Dunham and rotational constants of one electronic state, all in cm^-1.
///
/// gamma_e and beta_e are optional: an absent value evaluates exactly like an
/// explicit zero but is kept distinct so that it can be reported as "not
/// tabulated" and fitted independently.
struct SpectroscopicConstants {
  std::string label;
  double te = 0.0;
  double omega_e = 0.0;
  double omega_e_xe = 0.0;
  double omega_e_ye = 0.0;
  double b_e = 0.0;
  double alpha_e = 0.0;
  std::optional<double> gamma_e;
  double d_e = 0.0;
  std::optional<double> beta_e;

  double gamma_e_value() const { return gamma_e.value_or(0.0); }
  double beta_e_value() const { return beta_e.value_or(0.0); }

  /// omega_e > 0, B_e > 0 and D_e >= 0.
  bool is_physical() const;

  SpectroscopicConstants with_gamma_e(double value) const;
  SpectroscopicConstants with_beta_e(double value) const;
};

struct RotationalConstants {
  double b = 0.0;
  double d = 0.0;
};

struct RoVibLevel {
  int v = 0;
  int j = 0;
  double energy = 0.0;  // G(v) + F(v, J), T_e excluded
};

/// G(v).
double vibrational_term(const SpectroscopicConstants& c, int v);

/// B_v and D_v.
RotationalConstants rotational_constants(const SpectroscopicConstants& c, int v);

/// F(v, J) = B_v J(J+1) - D_v J^2 (J+1)^2.
double rotational_term(const SpectroscopicConstants& c, int v, int j);

RoVibLevel make_level(const SpectroscopicConstants& c, int v, int j);

/// [G(v1) + F(v1, J_upper)] - [G(0) + F(0, J_lower)].
///
/// J_upper must differ from J_lower by -2, 0 or +2 and be non-negative.
/// Throws DomainError otherwise.
double transition_wavenumber(const SpectroscopicConstants& c, int j_lower, int j_upper, int v1);

/// Band origin G(v1) - G(0); the rotating frame of the coherence.
double band_origin(const SpectroscopicConstants& c, int v1);

struct CharacteristicTimes {
  /// 1 / (2c |B_v1 - B_0|); empty when B_v1 == B_0 (no ro-vibrational revival).
  std::optional<double> rovib_revival_ps;
  /// 1 / (2c B_0).
  double rotational_revival_ps = 0.0;
  /// T_RoVib / dJ^2. An order-of-magnitude estimate only.
  std::optional<double> dephasing_estimate_ps;
};

CharacteristicTimes characteristic_times(const SpectroscopicConstants& c, int v1, double thermal_spread);

/// Table of constants keyed by state label ("N2_X", "N2_A").
class ConstantsDatabase {
public:
  /// The two rows of the nitrogen table shipped with the library.
  static ConstantsDatabase builtin();
  static ConstantsDatabase from_json(std::string_view text);
  static ConstantsDatabase from_file(const std::string& path);

  /// Throws ConfigError naming the label when absent.
  const SpectroscopicConstants& at(const std::string& label) const;
  bool contains(const std::string& label) const { return states_.contains(label); }
  std::vector<std::string> labels() const;

  void insert(SpectroscopicConstants c);

private:
  std::map<std::string, SpectroscopicConstants> states_;
};

/// Ground state X of 14N2 as tabulated (gamma_e, beta_e absent).
SpectroscopicConstants n2_ground_state();
/// A state of 14N2 as tabulated (beta_e absent).
SpectroscopicConstants n2_a_state();

/// Value of gamma_e retrieved from the revival fit, cm^-1.
inline constexpr double kN2FittedGammaE = -2.6e-5;

}  // namespace rovib
