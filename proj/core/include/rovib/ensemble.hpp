#pragma once

#include <span>
#include <vector>

namespace rovib {

/// Nuclear-spin statistical weights of even and odd J.
struct SpinWeights {
  double even = 2.0;
  double odd = 1.0;

  double of(int j) const { return j % 2 == 0 ? even : odd; }
};

/// Normalized rotational populations of v=0 at a temperature.
class ThermalEnsemble {
public:
  ThermalEnsemble(double temperature_k, SpinWeights spin, std::vector<double> weights, double neglected_tail);

  double temperature() const { return temperature_; }
  const SpinWeights& spin() const { return spin_; }
  int j_max() const { return static_cast<int>(weights_.size()) - 1; }
  double weight(int j) const { return j >= 0 && j <= j_max() ? weights_[static_cast<std::size_t>(j)] : 0.0; }
  std::span<const double> weights() const { return weights_; }
  /// Untruncated population beyond j_max, relative to the untruncated total.
  double neglected_tail() const { return neglected_tail_; }

private:
  double temperature_;
  SpinWeights spin_;
  std::vector<double> weights_;
  double neglected_tail_;
};

inline constexpr int kEnsembleJCap = 200;
inline constexpr double kDefaultTailTolerance = 1e-8;

/// weight[J] proportional to g_J (2J+1) exp(-hc B0 J(J+1) / kT).
///
/// J_max is the smallest J for which the discarded tail is below tail_tol of
/// the total. Throws DomainError for T <= 0, B0 <= 0, non-positive spin
/// weights, tail_tol outside (0, 1) or when the J cap cannot meet tail_tol.
ThermalEnsemble build_ensemble(double temperature_k, double b0, SpinWeights spin = {},
                               double tail_tol = kDefaultTailTolerance);

/// Population-weighted standard deviation of J.
double thermal_J_spread(const ThermalEnsemble& e);

/// Mean J.
double thermal_J_mean(const ThermalEnsemble& e);

}  // namespace rovib
