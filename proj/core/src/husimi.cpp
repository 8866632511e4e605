#include "rovib/husimi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "rovib/errors.hpp"
#include "rovib/parallel.hpp"
#include "rovib/units.hpp"

namespace rovib {

namespace {

constexpr double kRadPerFsPerCm1 = units::kTwoPi * units::kLightCmPerFs;
constexpr double kWindowSpan = 8.0;  // window sigmas kept in the overlap sum

double axis_step(std::span<const double> axis) { return axis.size() > 1 ? axis[1] - axis[0] : 1.0; }

double window_sigma_cm1(double window_fwhm_fs) {
  Pulse w;
  w.fwhm_fs = window_fwhm_fs;
  return spectral_sigma_cm1(w);
}

void check_axes(const HusimiAxes& axes) {
  auto uniform = [](const std::vector<double>& a) {
    if (a.empty()) return false;
    for (std::size_t i = 1; i < a.size(); ++i) {
      if (!(a[i] > a[i - 1])) return false;
    }
    return true;
  };
  if (!uniform(axes.time_fs) || !uniform(axes.frequency_cm1)) {
    throw DomainError("Husimi axes must be non-empty and increasing");
  }
}

/// Spectral field sampled at nodes with quadrature weights.
struct SampledField {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<std::complex<double>> values;
};

std::vector<double> accumulate_map(const SampledField& field, double window_fwhm_fs, const HusimiAxes& axes) {
  const double s = window_sigma_cm1(window_fwhm_fs);
  const double k = kRadPerFsPerCm1;
  const double norm2 = k / (units::kTwoPi * s * std::sqrt(units::kPi));
  const std::size_t nt = axes.time_fs.size();
  const std::size_t nf = axes.frequency_cm1.size();
  std::vector<double> out(nt * nf, 0.0);

  parallel_for(nf, [&](std::size_t row) {
    const double nu0 = axes.frequency_cm1[row];
    auto first = std::lower_bound(field.nodes.begin(), field.nodes.end(), nu0 - kWindowSpan * s);
    auto last = std::upper_bound(field.nodes.begin(), field.nodes.end(), nu0 + kWindowSpan * s);
    const auto lo = static_cast<std::size_t>(first - field.nodes.begin());
    const auto hi = static_cast<std::size_t>(last - field.nodes.begin());
    if (lo >= hi) return;

    std::vector<std::complex<double>> windowed(hi - lo);
    std::vector<double> detuning(hi - lo);
    for (std::size_t m = lo; m < hi; ++m) {
      const double x = field.nodes[m] - nu0;
      windowed[m - lo] = field.weights[m] * std::exp(-x * x / (2.0 * s * s)) * field.values[m];
      detuning[m - lo] = k * x;
    }
    for (std::size_t col = 0; col < nt; ++col) {
      const double t = axes.time_fs[col];
      std::complex<double> h = 0.0;
      for (std::size_t m = 0; m < windowed.size(); ++m) h += windowed[m] * std::polar(1.0, -detuning[m] * t);
      out[row * nt + col] = norm2 * std::norm(h);
    }
  });
  return out;
}

SampledField sample_pulse(const Pulse& p, double window_fwhm_fs, const HusimiAxes& axes) {
  const double sigma = spectral_sigma_cm1(p);
  const double s = window_sigma_cm1(window_fwhm_fs);
  double t_extent = 0.0;
  for (double t : axes.time_fs) t_extent = std::max(t_extent, std::abs(t));
  // Node spacing resolves both Gaussians and keeps the implied time period
  // 1 / (c dnu) well beyond the time axis.
  double step = std::min(sigma, s) / 8.0;
  if (t_extent > 0.0) step = std::min(step, 1.0 / (units::kLightCmPerFs * 4.0 * t_extent));
  const double lo = std::min(p.center_cm1 - 10.0 * sigma, axes.frequency_cm1.front() - kWindowSpan * s);
  const double hi = std::max(p.center_cm1 + 10.0 * sigma, axes.frequency_cm1.back() + kWindowSpan * s);
  SampledField f;
  f.nodes = uniform_grid(lo, hi, step);
  f.weights.assign(f.nodes.size(), step);
  f.values.resize(f.nodes.size());
  for (std::size_t i = 0; i < f.nodes.size(); ++i) f.values[i] = spectral_amplitude(p, f.nodes[i]);
  return f;
}

}  // namespace

HusimiMap::HusimiMap(HusimiAxes axes, std::vector<double> values, double window_fwhm_fs)
    : axes_(std::move(axes)), values_(std::move(values)), window_fwhm_fs_(window_fwhm_fs) {
  if (values_.size() != axes_.time_fs.size() * axes_.frequency_cm1.size()) {
    throw DomainError("Husimi map size does not match its axes");
  }
}

double HusimiMap::total() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum * axis_step(axes_.time_fs) * axis_step(axes_.frequency_cm1);
}

double HusimiMap::tilt() const {
  const std::size_t nt = axes_.time_fs.size();
  double m = 0.0, mt = 0.0, mf = 0.0;
  for (std::size_t r = 0; r < axes_.frequency_cm1.size(); ++r) {
    for (std::size_t c = 0; c < nt; ++c) {
      const double w = values_[r * nt + c];
      m += w;
      mt += w * axes_.time_fs[c];
      mf += w * axes_.frequency_cm1[r];
    }
  }
  mt /= m;
  mf /= m;
  double vt = 0.0, vf = 0.0, cov = 0.0;
  for (std::size_t r = 0; r < axes_.frequency_cm1.size(); ++r) {
    for (std::size_t c = 0; c < nt; ++c) {
      const double w = values_[r * nt + c];
      const double dt = axes_.time_fs[c] - mt;
      const double df = axes_.frequency_cm1[r] - mf;
      vt += w * dt * dt;
      vf += w * df * df;
      cov += w * dt * df;
    }
  }
  return cov / std::sqrt(vt * vf);
}

double HusimiMap::ridge_slope() const {
  const std::size_t nt = axes_.time_fs.size();
  std::vector<double> mass(nt, 0.0), centroid(nt, 0.0);
  for (std::size_t c = 0; c < nt; ++c) {
    for (std::size_t r = 0; r < axes_.frequency_cm1.size(); ++r) {
      const double w = values_[r * nt + c];
      mass[c] += w;
      centroid[c] += w * axes_.frequency_cm1[r];
    }
    if (mass[c] > 0.0) centroid[c] /= mass[c];
  }
  const double cut = 1e-3 * *std::max_element(mass.begin(), mass.end());
  double sw = 0.0, st = 0.0, sf = 0.0;
  for (std::size_t c = 0; c < nt; ++c) {
    if (mass[c] < cut) continue;
    sw += mass[c];
    st += mass[c] * axes_.time_fs[c];
    sf += mass[c] * centroid[c];
  }
  st /= sw;
  sf /= sw;
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < nt; ++c) {
    if (mass[c] < cut) continue;
    const double dt = axes_.time_fs[c] - st;
    num += mass[c] * dt * (centroid[c] - sf);
    den += mass[c] * dt * dt;
  }
  return num / den;
}

double default_window_fwhm(std::span<const Pulse> pulses) {
  if (pulses.empty()) throw DomainError("no pulses given");
  double w = pulses.front().fwhm_fs;
  for (const auto& p : pulses) w = std::min(w, p.fwhm_fs);
  return w;
}

HusimiAxes default_husimi_axes(std::span<const Pulse> pulses, double window_fwhm_fs, std::size_t n_time,
                               std::size_t n_freq) {
  if (pulses.empty()) throw DomainError("no pulses given");
  const double s = window_sigma_cm1(window_fwhm_fs);
  double t_lo = 1e300, t_hi = -1e300, f_lo = 1e300, f_hi = -1e300;
  for (const auto& p : pulses) {
    validate(p);
    const double half = 2.5 * (chirped_duration_fs(p) + window_fwhm_fs);
    t_lo = std::min(t_lo, p.delay_fs - half);
    t_hi = std::max(t_hi, p.delay_fs + half);
    const double sigma = spectral_sigma_cm1(p);
    f_lo = std::min(f_lo, p.center_cm1 - 5.0 * (sigma + s));
    f_hi = std::max(f_hi, p.center_cm1 + 5.0 * (sigma + s));
  }
  HusimiAxes axes;
  axes.time_fs = uniform_grid(t_lo, t_hi, (t_hi - t_lo) / static_cast<double>(n_time - 1));
  axes.frequency_cm1 = uniform_grid(f_lo, f_hi, (f_hi - f_lo) / static_cast<double>(n_freq - 1));
  axes.time_fs.resize(n_time);
  axes.frequency_cm1.resize(n_freq);
  return axes;
}

HusimiAxes default_husimi_axes(const TwoPhotonSpectrum& spectrum, double window_fwhm_fs, std::size_t n_time,
                               std::size_t n_freq) {
  const double s = window_sigma_cm1(window_fwhm_fs);
  const double width = spectrum.power_fwhm();
  const double centre = spectrum.power_centroid();
  // The difference-frequency field lasts roughly 1 / (c * width).
  const double duration = 1.0 / (units::kLightCmPerFs * width);
  const double half_t = 2.5 * (duration + window_fwhm_fs);
  const double half_f = 3.0 * width + 5.0 * s;
  HusimiAxes axes;
  axes.time_fs = uniform_grid(-half_t, half_t, 2.0 * half_t / static_cast<double>(n_time - 1));
  axes.frequency_cm1 = uniform_grid(centre - half_f, centre + half_f, 2.0 * half_f / static_cast<double>(n_freq - 1));
  axes.time_fs.resize(n_time);
  axes.frequency_cm1.resize(n_freq);
  return axes;
}

HusimiMap husimi_map(std::span<const Pulse> pulses, double window_fwhm_fs, const HusimiAxes& axes) {
  if (pulses.empty()) throw DomainError("no pulses given");
  if (!(window_fwhm_fs > 0.0)) throw DomainError("Husimi window must be > 0 fs");
  check_axes(axes);
  std::vector<double> total(axes.time_fs.size() * axes.frequency_cm1.size(), 0.0);
  for (const auto& p : pulses) {
    validate(p);
    const auto part = accumulate_map(sample_pulse(p, window_fwhm_fs, axes), window_fwhm_fs, axes);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += part[i];
  }
  return HusimiMap(axes, std::move(total), window_fwhm_fs);
}

HusimiMap husimi_map(const TwoPhotonSpectrum& spectrum, double window_fwhm_fs, const HusimiAxes& axes) {
  if (!(window_fwhm_fs > 0.0)) throw DomainError("Husimi window must be > 0 fs");
  check_axes(axes);
  SampledField f;
  const auto grid = spectrum.grid();
  const auto amp = spectrum.amplitude();
  f.nodes.assign(grid.begin(), grid.end());
  f.values.assign(amp.begin(), amp.end());
  f.weights.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double left = i > 0 ? grid[i] - grid[i - 1] : 0.0;
    const double right = i + 1 < grid.size() ? grid[i + 1] - grid[i] : 0.0;
    f.weights[i] = 0.5 * (left + right);
  }
  return HusimiMap(axes, accumulate_map(f, window_fwhm_fs, axes), window_fwhm_fs);
}

}  // namespace rovib
