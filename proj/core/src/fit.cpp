#include "rovib/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "rovib/dynamics.hpp"
#include "rovib/errors.hpp"
#include "rovib/parallel.hpp"

namespace rovib {

const char* parameter_name(FitParameter p) {
  switch (p) {
    case FitParameter::GammaE: return "gamma_e";
    case FitParameter::TauC: return "tau_c";
    case FitParameter::Scale: return "scale";
    case FitParameter::TimeOffset: return "t_offset";
    case FitParameter::BetaE: return "beta_e";
  }
  return "?";
}

std::optional<FitParameter> parse_parameter(std::string_view name) {
  for (auto p : {FitParameter::GammaE, FitParameter::TauC, FitParameter::Scale, FitParameter::TimeOffset,
                 FitParameter::BetaE}) {
    if (name == parameter_name(p)) return p;
  }
  return std::nullopt;
}

// --- forward model -----------------------------------------------------------

LineTable ForwardModel::lines(const ParameterValues& values) const {
  SpectroscopicConstants c = constants;
  if (auto it = values.find(FitParameter::GammaE); it != values.end()) c.gamma_e = it->second;
  if (auto it = values.find(FitParameter::BetaE); it != values.end()) c.beta_e = it->second;
  const auto ens = build_ensemble(temperature_k, rotational_constants(c, 0).b, spin);
  return assign_amplitudes(enumerate_lines(ens, c, v1), envelope, ratio);
}

namespace {

double value_or(const ParameterValues& v, FitParameter p, double fallback) {
  auto it = v.find(p);
  return it == v.end() ? fallback : it->second;
}

/// Model with unit scale.
std::vector<double> unit_model(const ForwardModel& model, const ParameterValues& values,
                               std::span<const double> times) {
  const auto table = model.lines(values);
  const double tau = value_or(values, FitParameter::TauC, 0.0);
  const DecayModel decay = tau > 0.0 ? DecayModel::collisional(tau) : DecayModel::none();
  const double offset = value_or(values, FitParameter::TimeOffset, 0.0);

  const double peak = std::norm(coherence_at(table, DecayModel::none(), 0.0));
  if (!(peak > 0.0)) throw DomainError("forward model has zero coherence at t = 0");

  std::vector<double> out(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    const double t = times[i] - offset;
    out[i] = t < 0.0 ? 0.0 : std::norm(coherence_at(table, decay, t)) / peak;
  });
  if (model.probe_fwhm_fs && times.size() > 1) {
    const double step = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    out = gaussian_smooth(out, step, *model.probe_fwhm_fs * 1e-3);
  }
  return out;
}

double rss_of(std::span<const double> model, std::span<const double> data) {
  double s = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = model[i] - data[i];
    s += r * r;
  }
  return s;
}

/// Objective over the search coordinates (free parameters other than a free scale).
class Objective {
public:
  Objective(const FitProblem& problem) : problem_(problem) {
    for (auto p : problem.free_parameters()) {
      if (p == FitParameter::Scale) {
        project_scale_ = true;
      } else {
        search_.push_back(p);
      }
    }
  }

  const std::vector<FitParameter>& search() const { return search_; }
  int evaluations() const { return evaluations_; }

  ParameterValues to_values(const std::vector<double>& x) const {
    ParameterValues v = problem_.initial_values();
    for (std::size_t i = 0; i < search_.size(); ++i) {
      const auto& spec = problem_.parameters.at(search_[i]);
      v[search_[i]] = spec.lower + std::clamp(x[i], 0.0, 1.0) * (spec.upper - spec.lower);
    }
    return v;
  }

  std::vector<double> to_unit(const ParameterValues& v) const {
    std::vector<double> x(search_.size());
    for (std::size_t i = 0; i < search_.size(); ++i) {
      const auto& spec = problem_.parameters.at(search_[i]);
      x[i] = (v.at(search_[i]) - spec.lower) / (spec.upper - spec.lower);
    }
    return x;
  }

  /// Evaluates and, when the scale is projected, writes the optimal scale into values.
  double operator()(const std::vector<double>& x, ParameterValues* values_out = nullptr) {
    ++evaluations_;
    ParameterValues v = to_values(x);
    auto m = unit_model(problem_.model, v, problem_.times);
    double scale = v.at(FitParameter::Scale);
    if (project_scale_) {
      double md = 0.0, mm = 0.0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        md += m[i] * problem_.data[i];
        mm += m[i] * m[i];
      }
      const auto& spec = problem_.parameters.at(FitParameter::Scale);
      scale = mm > 0.0 ? std::clamp(md / mm, spec.lower, spec.upper) : spec.initial;
      v[FitParameter::Scale] = scale;
    }
    for (auto& mi : m) mi *= scale;
    if (values_out) *values_out = v;
    return rss_of(m, problem_.data);
  }

private:
  const FitProblem& problem_;
  std::vector<FitParameter> search_;
  bool project_scale_ = false;
  int evaluations_ = 0;
};

struct SimplexRun {
  std::vector<double> best;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Bounded Nelder-Mead on the unit box; points are projected onto the box.
SimplexRun nelder_mead(Objective& f, std::vector<double> start, const std::vector<double>& unit_tol, double step,
                       int max_iterations, double zero_level) {
  const std::size_t n = start.size();
  auto clamp_point = [](std::vector<double> x) {
    for (auto& xi : x) xi = std::clamp(xi, 0.0, 1.0);
    return x;
  };
  std::vector<std::vector<double>> pts{clamp_point(start)};
  for (std::size_t i = 0; i < n; ++i) {
    auto x = pts.front();
    x[i] += (x[i] + step <= 1.0) ? step : -step;
    pts.push_back(clamp_point(x));
  }
  std::vector<double> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);

  SimplexRun run;
  std::vector<std::size_t> order(pts.size());
  for (int iter = 0;; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
    run.best = pts[best];
    run.value = vals[best];
    run.iterations = iter;

    if (vals[best] <= zero_level) {
      run.converged = true;
      return run;
    }
    bool small = true;
    for (std::size_t d = 0; d < n && small; ++d) {
      for (const auto& p : pts) {
        if (std::abs(p[d] - pts[best][d]) > unit_tol[d]) {
          small = false;
          break;
        }
      }
    }
    if (small) {
      run.converged = true;
      return run;
    }
    if (iter >= max_iterations) return run;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d] / static_cast<double>(n);
    }
    auto along = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t d = 0; d < n; ++d) x[d] = centroid[d] + coef * (pts[worst][d] - centroid[d]);
      return clamp_point(x);
    };

    const auto xr = along(-1.0);
    const double fr = f(xr);
    if (fr < vals[best]) {
      const auto xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const auto xc = along(outside ? -0.5 : 0.5);
    const double fc = f(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < n; ++d) pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
      vals[i] = f(pts[i]);
    }
  }
}

/// One-sigma uncertainties from the Gauss-Newton curvature J^T J of the residuals.
ParameterValues curvature_uncertainties(const FitProblem& problem, const ParameterValues& at, double rss) {
  const auto free = problem.free_parameters();
  ParameterValues out;
  if (free.empty()) return out;
  const std::size_t n = problem.data.size();
  const std::size_t p = free.size();

  auto residuals = [&](const ParameterValues& v) {
    auto m = unit_model(problem.model, v, problem.times);
    const double scale = v.at(FitParameter::Scale);
    for (std::size_t i = 0; i < n; ++i) m[i] = scale * m[i] - problem.data[i];
    return m;
  };

  Eigen::MatrixXd jac(n, p);
  for (std::size_t k = 0; k < p; ++k) {
    const auto& spec = problem.parameters.at(free[k]);
    const double h = 1e-4 * (spec.upper - spec.lower);
    auto plus = at, minus = at;
    plus[free[k]] = std::min(spec.upper, at.at(free[k]) + h);
    minus[free[k]] = std::max(spec.lower, at.at(free[k]) - h);
    const double span = plus[free[k]] - minus[free[k]];
    const auto rp = residuals(plus);
    const auto rm = residuals(minus);
    for (std::size_t i = 0; i < n; ++i) jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = (rp[i] - rm[i]) / span;
  }

  double peak = 0.0;
  for (double d : problem.data) peak = std::max(peak, std::abs(d));
  // Floor the residual variance at the numerical precision of the model.
  const double floor = std::pow(1e-8 * peak, 2);
  const double sigma2 = std::max(rss / static_cast<double>(n > p ? n - p : 1), floor);

  const Eigen::MatrixXd jtj = jac.transpose() * jac;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
  if (!lu.isInvertible()) {
    for (auto f : free) out[f] = std::numeric_limits<double>::infinity();
    return out;
  }
  const Eigen::MatrixXd cov = lu.inverse() * sigma2;
  for (std::size_t k = 0; k < p; ++k) {
    const double c = cov(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    out[free[k]] = c > 0.0 ? std::sqrt(c) : std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace

std::vector<double> model_signal(const ForwardModel& model, const ParameterValues& values,
                                 std::span<const double> times) {
  auto m = unit_model(model, values, times);
  const double scale = value_or(values, FitParameter::Scale, 1.0);
  for (auto& v : m) v *= scale;
  return m;
}

// --- problem -----------------------------------------------------------------

std::map<FitParameter, ParameterSpec> FitProblem::default_parameters() {
  return {
      {FitParameter::GammaE, {0.0, -1e-4, 1e-4, true, 1e-9}},
      {FitParameter::TauC, {150.0, 5.0, 5000.0, true, 1e-2}},
      {FitParameter::Scale, {1.0, 0.0, 100.0, true, 1e-8}},
      {FitParameter::TimeOffset, {0.0, -2.0, 2.0, true, 1e-4}},
      {FitParameter::BetaE, {0.0, -1e-6, 1e-6, false, 1e-12}},
  };
}

std::vector<FitParameter> FitProblem::free_parameters() const {
  std::vector<FitParameter> out;
  for (const auto& [p, spec] : parameters) {
    if (spec.free) out.push_back(p);
  }
  return out;
}

ParameterValues FitProblem::initial_values() const {
  ParameterValues v;
  for (const auto& [p, spec] : parameters) v[p] = spec.initial;
  if (!v.contains(FitParameter::Scale)) v[FitParameter::Scale] = 1.0;
  return v;
}

void FitProblem::validate() const {
  if (times.size() != data.size()) throw DomainError("fit data: times and signal lengths differ");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw DomainError("fit data: times must be strictly increasing");
  }
  for (double d : data) {
    if (!std::isfinite(d)) throw DomainError("fit data: signal contains non-finite values");
  }
  for (const auto& [p, spec] : parameters) {
    const std::string name = parameter_name(p);
    if (spec.free) {
      if (!(spec.lower < spec.upper)) throw DomainError("parameter " + name + ": lower bound must be < upper bound");
      if (!(spec.tolerance > 0.0)) throw DomainError("parameter " + name + ": tolerance must be > 0");
    }
    if (spec.initial < spec.lower || spec.initial > spec.upper) {
      throw DomainError("parameter " + name + ": initial value outside its bounds");
    }
  }
  if (auto it = parameters.find(FitParameter::TauC); it != parameters.end() && !(it->second.lower > 0.0)) {
    throw DomainError("parameter tau_c: lower bound must be > 0");
  }
  const std::size_t free = free_parameters().size();
  if (times.size() < 10 * std::max<std::size_t>(free, 1)) {
    throw DomainError("fit data: need at least 10 points per free parameter (" + std::to_string(times.size()) +
                      " points, " + std::to_string(free) + " free)");
  }
}

// --- fitting -------------------------------------------------------------------

FitResult fit(const FitProblem& problem, const FitOptions& opts) {
  problem.validate();

  FitResult result;
  result.free = problem.free_parameters();
  result.values = problem.initial_values();

  Objective objective(problem);
  ParameterValues start_values;
  const auto start = objective.to_unit(result.values);
  result.initial_rss = objective(start, &start_values);

  const auto [lo, hi] = std::minmax_element(problem.data.begin(), problem.data.end());
  if (*hi - *lo <= 1e-12 * std::max(std::abs(*hi), 1.0)) {
    result.rss = result.initial_rss;
    result.identifiable = false;
    result.converged = false;
    result.evaluations = objective.evaluations();
    result.message = "signal is constant: parameters are not identifiable";
    return result;
  }

  double data_norm = 0.0;
  for (double d : problem.data) data_norm += d * d;
  const double zero_level = 1e-28 * data_norm;

  std::vector<double> unit_tol;
  for (auto p : objective.search()) {
    const auto& spec = problem.parameters.at(p);
    unit_tol.push_back(spec.tolerance / (spec.upper - spec.lower));
  }

  std::vector<double> best_x = start;
  double best_val = result.initial_rss;
  bool converged = objective.search().empty();
  int iterations = 0;

  if (!objective.search().empty()) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> jitter(-opts.restart_jitter, opts.restart_jitter);
    for (int run = 0; run <= opts.restarts; ++run) {
      std::vector<double> x0 = best_x;
      if (run > 0) {
        for (auto& xi : x0) xi = std::clamp(xi + jitter(rng), 0.0, 1.0);
      }
      const auto r = nelder_mead(objective, x0, unit_tol, opts.initial_step, opts.max_iterations, zero_level);
      iterations += r.iterations;
      if (run == 0 || r.value < best_val) {
        best_val = r.value;
        best_x = r.best;
        converged = r.converged;
      }
      if (best_val <= zero_level) break;
    }
  }

  ParameterValues fitted;
  result.rss = objective(best_x, &fitted);
  result.values = fitted;
  result.converged = converged;
  result.iterations = iterations;
  result.evaluations = objective.evaluations();
  result.uncertainties = curvature_uncertainties(problem, fitted, result.rss);
  result.message = converged ? "converged" : "iteration cap reached";
  return result;
}

std::vector<ProfilePoint> profile_parameter(const FitProblem& problem, FitParameter which,
                                            std::span<const double> grid, const FitOptions& opts) {
  auto it = problem.parameters.find(which);
  if (it == problem.parameters.end() || !it->second.free) {
    throw DomainError(std::string("cannot profile ") + parameter_name(which) + ": it is not a free parameter");
  }
  std::vector<ProfilePoint> out;
  out.reserve(grid.size());
  for (double value : grid) {
    FitProblem fixed = problem;
    auto& spec = fixed.parameters.at(which);
    spec.free = false;
    spec.initial = value;
    spec.lower = std::min(spec.lower, value);
    spec.upper = std::max(spec.upper, value);
    const auto r = fit(fixed, opts);
    out.push_back({value, r.rss, r.converged});
  }
  return out;
}

}  // namespace rovib
