#include "rovib/excitation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rovib/errors.hpp"

namespace rovib {

namespace {

// 2D-rotator matrix elements of cos^2(theta).
constexpr double kCos2SameJ = 0.5;
constexpr double kCos2DeltaJ2 = 0.25;

}  // namespace

char branch_letter(Branch b) {
  switch (b) {
    case Branch::O: return 'O';
    case Branch::Q: return 'Q';
    case Branch::S: return 'S';
  }
  return '?';
}

std::string describe(const RamanLine& line) {
  return std::string(1, branch_letter(line.branch)) + "(" + std::to_string(line.j_lower) + ") at " +
         std::to_string(line.wavenumber_cm1) + " cm^-1";
}

std::size_t LineTable::count(Branch b) const {
  return static_cast<std::size_t>(
      std::count_if(lines.begin(), lines.end(), [b](const RamanLine& l) { return l.branch == b; }));
}

PolarizabilityDerivatives n2_polarizability_derivatives() {
  const double re = 1.0;
  return {8.7 / re, 13.3 / re, re};
}

std::optional<double> BranchingRatio::intensity_ratio() const {
  if (!ratio) return std::nullopt;
  return *ratio * *ratio;
}

BranchingRatio BranchingRatio::fixed(double n) {
  if (std::isinf(n) && n > 0) return q_only();
  if (!(n > 0.0)) throw DomainError("branching ratio must be > 0");
  return BranchingRatio{n};
}

BranchingRatio branching_ratio(const PolarizabilityDerivatives& p) {
  if (p.delta_a_prime == 0.0) return BranchingRatio::q_only();
  return BranchingRatio{(p.a_perp_prime + p.delta_a_prime * kCos2SameJ) / (p.delta_a_prime * kCos2DeltaJ2)};
}

LineTable enumerate_lines(const ThermalEnsemble& ens, const SpectroscopicConstants& consts, int v1) {
  if (v1 < 1) throw DomainError("upper vibrational level must be >= 1");
  LineTable table;
  table.info.constants_label = consts.label;
  table.info.temperature_k = ens.temperature();
  table.info.v1 = v1;
  table.info.frame_cm1 = band_origin(consts, v1);

  auto add = [&](Branch b, int j_lower, int j_upper) {
    RamanLine l;
    l.branch = b;
    l.j_lower = j_lower;
    l.j_upper = j_upper;
    l.wavenumber_cm1 = transition_wavenumber(consts, j_lower, j_upper, v1);
    l.thermal_weight = ens.weight(j_lower);
    l.amplitude = l.thermal_weight;
    table.lines.push_back(l);
  };
  const int jmax = ens.j_max();
  table.lines.reserve(static_cast<std::size_t>(3 * (jmax + 1)));
  for (int j = 0; j <= jmax; ++j) add(Branch::Q, j, j);
  for (int j = 0; j <= jmax; ++j) add(Branch::S, j, j + 2);
  for (int j = 2; j <= jmax; ++j) add(Branch::O, j, j - 2);
  return table;
}

LineTable assign_amplitudes(const LineTable& lines, const TwoPhotonSpectrum& a2, const BranchingRatio& ratio,
                            const AmplitudeOptions& opts) {
  const double os_scale = ratio.os_amplitude_scale();
  const double peak = a2.peak_modulus();
  LineTable out = lines;
  for (auto& l : out.lines) {
    const double b = l.branch == Branch::Q ? 1.0 : os_scale;
    if (!a2.covers(l.wavenumber_cm1)) {
      throw OutOfBandError("line " + describe(l) + " is outside the two-photon spectrum [" +
                           std::to_string(a2.grid().front()) + ", " + std::to_string(a2.grid().back()) + "]");
    }
    const auto linear = a2.at(l.wavenumber_cm1);
    if (std::abs(linear - a2.at_quadratic(l.wavenumber_cm1)) > opts.interpolation_tolerance * peak) {
      throw ResolutionError("two-photon grid too coarse at line " + describe(l) +
                            ": linear and quadratic interpolation disagree");
    }
    l.amplitude = l.thermal_weight * b * linear;
  }
  return out;
}

LineTable assign_amplitudes(const LineTable& lines, const TwoPhotonSpectrum& a2, double ratio,
                            const AmplitudeOptions& opts) {
  return assign_amplitudes(lines, a2, BranchingRatio::fixed(ratio), opts);
}

std::vector<double> line_sampling_grid(const LineTable& lines, double half_width_cm1, double step_cm1) {
  if (!(step_cm1 > 0.0) || !(half_width_cm1 > 0.0)) throw DomainError("stencil width and step must be > 0");
  // Snap stencils to a common lattice so overlapping stencils share nodes.
  std::vector<long long> idx;
  for (const auto& l : lines.lines) {
    const auto lo = static_cast<long long>(std::floor((l.wavenumber_cm1 - half_width_cm1) / step_cm1));
    const auto hi = static_cast<long long>(std::ceil((l.wavenumber_cm1 + half_width_cm1) / step_cm1));
    for (long long i = lo; i <= hi; ++i) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  std::vector<double> grid(idx.size());
  std::transform(idx.begin(), idx.end(), grid.begin(), [&](long long i) { return static_cast<double>(i) * step_cm1; });
  return grid;
}

}  // namespace rovib
