#include "rovib/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rovib/errors.hpp"

namespace rovib {

const char* kind_name(ExtremumKind k) { return k == ExtremumKind::Peak ? "peak" : "dip"; }

namespace {

double uniform_step(std::span<const double> times) {
  if (times.size() < 2) return 1.0;
  return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

/// Local maxima of y (plateaus reported at their middle sample), interior only.
std::vector<std::size_t> local_maxima(const std::vector<double>& y) {
  std::vector<std::size_t> out;
  std::size_t i = 1;
  while (i + 1 < y.size()) {
    if (y[i] > y[i - 1]) {
      std::size_t j = i;
      while (j + 1 < y.size() && y[j + 1] == y[i]) ++j;
      if (j + 1 < y.size() && y[j + 1] < y[i]) {
        out.push_back((i + j) / 2);
      }
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

double prominence(const std::vector<double>& y, std::size_t i) {
  double left_min = y[i];
  for (std::size_t k = i; k-- > 0;) {
    if (y[k] > y[i]) break;
    left_min = std::min(left_min, y[k]);
  }
  double right_min = y[i];
  for (std::size_t k = i + 1; k < y.size(); ++k) {
    if (y[k] > y[i]) break;
    right_min = std::min(right_min, y[k]);
  }
  return y[i] - std::max(left_min, right_min);
}

struct Candidate {
  std::size_t index;
  ExtremumKind kind;
  double prominence;
};

}  // namespace

std::vector<Extremum> detect_extrema(std::span<const double> times, std::span<const double> signal,
                                     const ExtremaOptions& opts) {
  if (times.size() != signal.size()) throw DomainError("times and signal lengths differ");
  if (times.empty()) throw DomainError("cannot detect extrema of an empty trace");
  if (opts.smooth_fwhm_ps < 0.0) throw DomainError("smoothing width must be >= 0");

  const double step = uniform_step(times);
  const auto s = gaussian_smooth(std::vector<double>(signal.begin(), signal.end()), step, opts.smooth_fwhm_ps);
  double top = 0.0;
  for (double v : s) top = std::max(top, std::abs(v));
  if (top == 0.0) return {};
  const double threshold = opts.min_prominence * top;

  std::vector<Candidate> found;
  for (auto i : local_maxima(s)) {
    const double p = prominence(s, i);
    if (p >= threshold && p > 0.0) found.push_back({i, ExtremumKind::Peak, p});
  }
  std::vector<double> neg(s.size());
  std::transform(s.begin(), s.end(), neg.begin(), [](double v) { return -v; });
  for (auto i : local_maxima(neg)) {
    const double p = prominence(neg, i);
    if (p >= threshold && p > 0.0) found.push_back({i, ExtremumKind::Dip, p});
  }
  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) { return a.index < b.index; });

  std::vector<Extremum> out;
  out.reserve(found.size());
  for (std::size_t k = 0; k < found.size(); ++k) {
    const auto& c = found[k];
    Extremum e;
    e.time_ps = times[c.index];
    e.kind = c.kind;
    e.value = s[c.index];
    e.prominence = c.prominence;
    e.center_ps = e.time_ps;

    // Neighbouring opposite extrema bound the region and set the reference level.
    std::optional<std::size_t> left, right;
    for (std::size_t m = k; m-- > 0;) {
      if (found[m].kind != c.kind) {
        left = found[m].index;
        break;
      }
    }
    for (std::size_t m = k + 1; m < found.size(); ++m) {
      if (found[m].kind != c.kind) {
        right = found[m].index;
        break;
      }
    }
    if (left || right) {
      const bool dip = c.kind == ExtremumKind::Dip;
      double ref = dip ? 1e300 : -1e300;
      for (auto b : {left, right}) {
        if (b) ref = dip ? std::min(ref, s[*b]) : std::max(ref, s[*b]);
      }
      const double level = e.value + opts.center_level * (ref - e.value);
      auto inside = [&](std::size_t j) { return dip ? s[j] <= level : s[j] >= level; };
      const std::size_t lo_bound = left ? *left : 0;
      const std::size_t hi_bound = right ? *right : s.size() - 1;
      std::size_t a = c.index, b = c.index;
      while (a > lo_bound && inside(a - 1)) --a;
      while (b < hi_bound && inside(b + 1)) ++b;
      auto crossing = [&](std::size_t in, std::size_t out_idx) {
        const double d = s[out_idx] - s[in];
        const double f = d != 0.0 ? (level - s[in]) / d : 0.0;
        return times[in] + std::clamp(f, 0.0, 1.0) * (times[out_idx] - times[in]);
      };
      const double ta = (a > lo_bound) ? crossing(a, a - 1) : times[a];
      const double tb = (b < hi_bound) ? crossing(b, b + 1) : times[b];
      e.center_ps = 0.5 * (ta + tb);
    }
    out.push_back(e);
  }
  return out;
}

std::vector<Extremum> detect_extrema(const CoherenceTrace& trace, const ExtremaOptions& opts) {
  return detect_extrema(trace.times, trace.signal, opts);
}

RevivalReport classify_fractions(std::span<const Extremum> extrema, double revival_time_ps, int q_max,
                                 double tol_ps) {
  if (!(revival_time_ps > 0.0)) throw DomainError("revival time must be > 0");
  if (q_max < 1) throw DomainError("q_max must be >= 1");
  if (tol_ps < 0.0) throw DomainError("matching tolerance must be >= 0");

  RevivalReport report;
  report.revival_time_ps = revival_time_ps;
  report.q_max = q_max;
  report.tolerance_ps = tol_ps;

  for (const auto& e : extrema) {
    RevivalEntry entry;
    entry.time_ps = e.center_ps;
    entry.kind = e.kind;
    entry.prominence = e.prominence;

    std::optional<Fraction> best;
    double best_err = 0.0;
    for (int q = 1; q <= q_max; ++q) {
      const auto p = static_cast<int>(std::lround(e.center_ps * q / revival_time_ps));
      if (p < 1 || std::gcd(p, q) != 1) continue;
      const double err = e.center_ps - revival_time_ps * p / q;
      if (!best || std::abs(err) < std::abs(best_err)) {
        best = Fraction{p, q};
        best_err = err;
      }
    }
    if (best && std::abs(best_err) <= tol_ps) {
      entry.fraction = best;
      entry.match_error_ps = best_err;
      if (best->p == 1 && best->q == 1 && e.kind == ExtremumKind::Peak) report.measured_revival_ps = e.center_ps;
    }
    report.entries.push_back(entry);
  }
  return report;
}

std::optional<double> dephasing_time(std::span<const double> times, std::span<const double> magnitude,
                                     double smooth_fwhm_ps, double hold_ps) {
  if (times.size() != magnitude.size() || times.empty()) throw DomainError("dephasing needs a non-empty trace");
  const double step = uniform_step(times);
  const auto s = gaussian_smooth(std::vector<double>(magnitude.begin(), magnitude.end()), step, smooth_fwhm_ps);
  const double threshold = magnitude.front() / std::exp(1.0);

  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] < threshold)) continue;
    bool held = true;
    std::size_t j = i;
    for (; j < s.size() && times[j] - times[i] < hold_ps; ++j) {
      if (!(s[j] < threshold)) {
        held = false;
        break;
      }
    }
    if (held && j == s.size()) return std::nullopt;  // trace ends before the hold interval
    if (!held) {
      i = j;
      continue;
    }
    const double f = (s[i - 1] - threshold) / (s[i - 1] - s[i]);
    return times[i - 1] + f * (times[i] - times[i - 1]);
  }
  return std::nullopt;
}

std::optional<double> dephasing_time(const CoherenceTrace& trace, double smooth_fwhm_ps, double hold_ps) {
  std::vector<double> mag(trace.rho.size());
  std::transform(trace.rho.begin(), trace.rho.end(), mag.begin(), [](auto z) { return std::abs(z); });
  return dephasing_time(trace.times, mag, smooth_fwhm_ps, hold_ps);
}

BurstFeature measure_burst(std::span<const double> times, std::span<const double> signal, double nominal_ps,
                           double half_window_ps, double highpass_fwhm_ps) {
  if (times.size() != signal.size() || times.size() < 2) throw DomainError("measure_burst: need matching samples");
  const double step = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  const std::vector<double> values(signal.begin(), signal.end());
  const auto smooth = gaussian_smooth(values, step, highpass_fwhm_ps);

  BurstFeature out;
  out.nominal_ps = nominal_ps;
  double mass = 0.0, moment = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - nominal_ps) > half_window_ps) continue;
    const double hp = values[i] - smooth[i];
    out.amplitude = std::max(out.amplitude, std::abs(hp));
    mass += hp * hp;
    moment += hp * hp * times[i];
  }
  if (mass == 0.0 && out.amplitude == 0.0) {
    bool any = std::any_of(times.begin(), times.end(),
                           [&](double t) { return std::abs(t - nominal_ps) <= half_window_ps; });
    if (!any) throw DomainError("measure_burst: no samples within the window");
    out.centroid_ps = nominal_ps;
    return out;
  }
  out.centroid_ps = moment / mass;
  return out;
}

}  // namespace rovib
