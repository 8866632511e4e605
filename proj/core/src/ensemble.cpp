#include "rovib/ensemble.hpp"

#include <cmath>
#include <string>

#include "rovib/errors.hpp"
#include "rovib/units.hpp"

namespace rovib {

ThermalEnsemble::ThermalEnsemble(double temperature_k, SpinWeights spin, std::vector<double> weights,
                                 double neglected_tail)
    : temperature_(temperature_k), spin_(spin), weights_(std::move(weights)), neglected_tail_(neglected_tail) {
  if (weights_.empty()) throw DomainError("thermal ensemble needs at least one rotational level");
}

ThermalEnsemble build_ensemble(double temperature_k, double b0, SpinWeights spin, double tail_tol) {
  if (!(temperature_k > 0.0)) throw DomainError("temperature must be > 0 K, got " + std::to_string(temperature_k));
  if (!(b0 > 0.0)) throw DomainError("B0 must be > 0");
  if (!(spin.even > 0.0) || !(spin.odd > 0.0)) throw DomainError("spin weights must be > 0");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw DomainError("tail tolerance must lie in (0, 1)");

  const double x = units::kSecondRadiation * b0 / temperature_k;
  // Levels past the cap still count towards the total, so that an
  // insufficient cap is detected rather than silently renormalized away.
  std::vector<double> raw;
  double running = 0.0;
  for (int j = 0;; ++j) {
    const double term = spin.of(j) * (2.0 * j + 1.0) * std::exp(-x * j * (j + 1.0));
    raw.push_back(term);
    running += term;
    if (j >= kEnsembleJCap && (term <= 1e-18 * running || j >= 1000000)) break;
  }

  // Suffix sums, accumulated from the small end.
  std::vector<double> tail(raw.size() + 1, 0.0);
  for (std::size_t j = raw.size(); j-- > 0;) tail[j] = tail[j + 1] + raw[j];
  const double total = tail[0];

  const auto cap = static_cast<std::size_t>(kEnsembleJCap);
  std::size_t j_max = 0;
  while (j_max < cap && tail[j_max + 1] >= tail_tol * total) ++j_max;
  if (tail[j_max + 1] >= tail_tol * total) {
    throw DomainError("temperature " + std::to_string(temperature_k) + " K populates levels beyond J=" +
                      std::to_string(kEnsembleJCap));
  }

  std::vector<double> w(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(j_max + 1));
  double kept = 0.0;
  for (double v : w) kept += v;
  for (double& v : w) v /= kept;
  return ThermalEnsemble(temperature_k, spin, std::move(w), tail[j_max + 1] / total);
}

double thermal_J_mean(const ThermalEnsemble& e) {
  double m = 0.0;
  for (int j = 0; j <= e.j_max(); ++j) m += e.weight(j) * j;
  return m;
}

double thermal_J_spread(const ThermalEnsemble& e) {
  const double m = thermal_J_mean(e);
  double var = 0.0;
  for (int j = 0; j <= e.j_max(); ++j) var += e.weight(j) * (j - m) * (j - m);
  return std::sqrt(var);
}

}  // namespace rovib
