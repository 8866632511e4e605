#include "rovib/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "rovib/errors.hpp"
#include "rovib/parallel.hpp"
#include "rovib/units.hpp"

namespace rovib {

DecayModel DecayModel::collisional(double tau_c_ps) {
  if (!(tau_c_ps > 0.0)) throw DomainError("collisional decay time must be > 0 ps");
  return DecayModel{tau_c_ps};
}

namespace {

struct Phasor {
  std::complex<double> amplitude;
  double rate;  // rad/ps
};

std::vector<Phasor> phasors(const LineTable& lines) {
  std::vector<Phasor> out;
  out.reserve(lines.lines.size());
  for (const auto& l : lines.lines) {
    out.push_back({l.amplitude, units::angular_per_ps(l.wavenumber_cm1 - lines.info.frame_cm1)});
  }
  return out;
}

std::complex<double> evaluate(const std::vector<Phasor>& terms, const DecayModel& decay, double t) {
  std::complex<double> sum = 0.0;
  for (const auto& p : terms) sum += p.amplitude * std::polar(1.0, -p.rate * t);
  return sum * decay.factor(t);
}

}  // namespace

std::complex<double> coherence_at(const LineTable& lines, const DecayModel& decay, double t_ps) {
  if (t_ps < 0.0) throw DomainError("coherence is defined for t >= 0");
  return evaluate(phasors(lines), decay, t_ps);
}

std::size_t TraceGrid::size() const {
  return static_cast<std::size_t>(std::floor((t1_ps - t0_ps) / dt_ps + 1e-9)) + 1;
}

double fastest_beat_period_ps(const LineTable& lines) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& l : lines.lines) {
    if (l.amplitude == std::complex<double>(0.0)) continue;
    lo = std::min(lo, l.wavenumber_cm1);
    hi = std::max(hi, l.wavenumber_cm1);
  }
  if (!(hi > lo)) return std::numeric_limits<double>::infinity();
  return 1.0 / (units::kLightCmPerPs * (hi - lo));
}

std::vector<double> gaussian_smooth(const std::vector<double>& values, double step, double fwhm) {
  if (fwhm <= 0.0 || values.size() < 2) return values;
  const double sigma = fwhm / units::kFwhmPerSigma / step;  // samples
  const auto half = static_cast<std::ptrdiff_t>(std::ceil(5.0 * sigma));
  if (half < 1) return values;
  std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
  for (std::ptrdiff_t k = -half; k <= half; ++k) {
    kernel[static_cast<std::size_t>(k + half)] = std::exp(-0.5 * (k / sigma) * (k / sigma));
  }
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  std::vector<double> out(values.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0, norm = 0.0;
    for (std::ptrdiff_t k = -half; k <= half; ++k) {
      const std::ptrdiff_t j = i + k;
      if (j < 0 || j >= n) continue;
      const double w = kernel[static_cast<std::size_t>(k + half)];
      acc += w * values[static_cast<std::size_t>(j)];
      norm += w;
    }
    out[static_cast<std::size_t>(i)] = acc / norm;
  }
  return out;
}

CoherenceTrace signal_trace(const LineTable& lines, const DecayModel& decay, const TraceGrid& grid) {
  if (!(grid.t0_ps >= 0.0)) throw DomainError("trace must start at t0 >= 0");
  if (!(grid.t1_ps > grid.t0_ps)) throw DomainError("trace needs t1 > t0");
  if (!(grid.dt_ps > 0.0)) throw DomainError("trace step must be > 0");
  if (grid.probe_fwhm_fs && !(*grid.probe_fwhm_fs > 0.0)) throw DomainError("probe duration must be > 0 fs");

  const std::size_t n = grid.size();
  const auto terms = phasors(lines);

  CoherenceTrace trace;
  trace.frame_cm1 = lines.info.frame_cm1;
  trace.decay = decay;
  trace.probe_fwhm_fs = grid.probe_fwhm_fs;
  trace.times.resize(n);
  trace.rho.resize(n);
  trace.signal.resize(n);

  parallel_for(n, [&](std::size_t i) {
    const double t = grid.time(i);
    trace.times[i] = t;
    trace.rho[i] = evaluate(terms, decay, t);
    trace.signal[i] = std::norm(trace.rho[i]);
  });

  if (grid.probe_fwhm_fs) trace.signal = gaussian_smooth(trace.signal, grid.dt_ps, *grid.probe_fwhm_fs * 1e-3);

  const double beat = fastest_beat_period_ps(lines);
  if (beat < 2.0 * grid.dt_ps) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "aliasing: fastest line beat period %.4g ps is shorter than two grid steps (%.4g ps)",
                  beat, 2.0 * grid.dt_ps);
    trace.warnings.emplace_back(msg);
  }
  return trace;
}

}  // namespace rovib
