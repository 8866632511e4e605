#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rovib/errors.hpp"
#include "rovib/fit.hpp"
#include "support.hpp"

using namespace rovib;
using rovib::testing::n2_fitted;

namespace {

ForwardModel q_model() {
  ForwardModel m;
  m.constants = n2_fitted();
  m.envelope = TwoPhotonSpectrum::flat(1000.0, 4000.0);
  m.ratio = BranchingRatio::q_only();
  return m;
}

std::vector<double> grid(double t0, double t1, double dt) {
  std::vector<double> t;
  for (int i = 0; t0 + i * dt <= t1 + 1e-9; ++i) t.push_back(t0 + i * dt);
  return t;
}

const ParameterValues kTruth{{FitParameter::GammaE, kN2FittedGammaE},
                             {FitParameter::TauC, 1000.0},
                             {FitParameter::Scale, 2.0},
                             {FitParameter::TimeOffset, 0.0},
                             {FitParameter::BetaE, 0.0}};

// gamma_e, tau_c and scale free; t_offset fixed at 0 to keep the suite fast.
FitProblem problem(const std::vector<double>& times, std::vector<double> data) {
  FitProblem p;
  p.times = times;
  p.data = std::move(data);
  p.model = q_model();
  p.parameters.at(FitParameter::TimeOffset).free = false;
  p.parameters.at(FitParameter::GammaE).initial = -1.5e-5;
  p.parameters.at(FitParameter::TauC).initial = 600.0;
  return p;
}

std::vector<double> noisy(std::vector<double> clean, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  for (auto& v : clean) v += n(rng);
  return clean;
}

}  // namespace

TEST(FitModel, NormalizedAndCausal) {
  const auto t = grid(-1.0, 5.0, 0.5);
  auto v = kTruth;
  v[FitParameter::TimeOffset] = 1.0;
  const auto s = model_signal(q_model(), v, t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < 1.0) EXPECT_EQ(s[i], 0.0);
  }
  EXPECT_NEAR(s[4], 2.0, 1e-12);  // t = 1 = t_offset
  v.erase(FitParameter::TauC);
  EXPECT_NEAR(model_signal(q_model(), v, t)[4], 2.0, 1e-12);
}

TEST(FitParameters, Names) {
  for (auto p : {FitParameter::GammaE, FitParameter::TauC, FitParameter::Scale, FitParameter::TimeOffset,
                 FitParameter::BetaE}) {
    EXPECT_EQ(parse_parameter(parameter_name(p)), p);
  }
  EXPECT_FALSE(parse_parameter("gamma").has_value());
  const auto d = FitProblem::default_parameters();
  EXPECT_TRUE(d.at(FitParameter::GammaE).free);
  EXPECT_FALSE(d.at(FitParameter::BetaE).free);
}

TEST(FitValidation, RejectsBadProblems) {
  const auto t = grid(0.0, 20.0, 1.0);  // 21 points < 30 for three free parameters
  EXPECT_THROW(fit(problem(t, std::vector<double>(t.size(), 1.0))), DomainError);

  const auto t2 = grid(0.0, 100.0, 1.0);
  auto p = problem(t2, std::vector<double>(t2.size(), 1.0));
  p.data.pop_back();
  EXPECT_THROW(p.validate(), DomainError);

  p = problem(t2, std::vector<double>(t2.size(), 1.0));
  p.parameters.at(FitParameter::TauC).lower = 0.0;
  EXPECT_THROW(p.validate(), DomainError);

  p = problem(t2, std::vector<double>(t2.size(), 1.0));
  p.parameters.at(FitParameter::GammaE).initial = 1.0;
  EXPECT_THROW(p.validate(), DomainError);

  p = problem(t2, std::vector<double>(t2.size(), 1.0));
  p.data[3] = std::nan("");
  EXPECT_THROW(p.validate(), DomainError);

  p = problem(t2, std::vector<double>(t2.size(), 1.0));
  p.times[5] = p.times[4];
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(Fit, ConstantDataIsNotIdentifiable) {
  const auto t = grid(0.0, 100.0, 1.0);
  const auto r = fit(problem(t, std::vector<double>(t.size(), 0.7)));
  EXPECT_FALSE(r.identifiable);
  EXPECT_FALSE(r.converged);
}

TEST(Fit, NoiseFreeStartAtTruth) {
  const auto t = grid(0.0, 1000.0, 1.0);
  auto p = problem(t, model_signal(q_model(), kTruth, t));
  p.parameters.at(FitParameter::GammaE).initial = kTruth.at(FitParameter::GammaE);
  p.parameters.at(FitParameter::TauC).initial = kTruth.at(FitParameter::TauC);
  const auto r = fit(p);
  EXPECT_LT(r.rss, 1e-20);
  EXPECT_NEAR(r.values.at(FitParameter::GammaE), kN2FittedGammaE, 1e-12);
  EXPECT_NEAR(r.values.at(FitParameter::Scale), 2.0, 1e-10);
}

class NoisyFit : public ::testing::Test {
protected:
  static void SetUpTestSuite() {
    times_ = grid(0.0, 1000.0, 1.0);
    data_ = noisy(model_signal(q_model(), kTruth, times_), 0.01, 7);
    result_ = fit(problem(times_, data_));
  }
  static inline std::vector<double> times_;
  static inline std::vector<double> data_;
  static inline FitResult result_;
};

TEST_F(NoisyFit, RecoversParameters) {
  const auto& r = result_;
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.identifiable);
  EXPECT_LE(r.rss, r.initial_rss);
  const double dg = r.values.at(FitParameter::GammaE) - kN2FittedGammaE;
  EXPECT_LT(std::abs(dg), 4.0 * r.uncertainties.at(FitParameter::GammaE) + 1e-7);
  EXPECT_NEAR(r.values.at(FitParameter::TauC), 1000.0, 50.0);
  EXPECT_NEAR(r.values.at(FitParameter::Scale), 2.0, 0.02);
  // Residual consistent with the injected noise.
  EXPECT_NEAR(r.rss / static_cast<double>(times_.size()), 1e-4, 2e-5);
  EXPECT_EQ(r.uncertainties.count(FitParameter::BetaE), 0u);
}

TEST_F(NoisyFit, Reproducible) {
  const auto again = fit(problem(times_, data_));
  EXPECT_EQ(again.rss, result_.rss);
  for (auto [k, v] : result_.values) EXPECT_EQ(again.values.at(k), v);
}

TEST_F(NoisyFit, ScaleInvariance) {
  std::vector<double> scaled = data_;
  for (auto& v : scaled) v *= 3.0;
  const auto r = fit(problem(times_, scaled));
  EXPECT_NEAR(r.values.at(FitParameter::GammaE), result_.values.at(FitParameter::GammaE), 2e-8);
  EXPECT_NEAR(r.values.at(FitParameter::TauC), result_.values.at(FitParameter::TauC), 1.0);
  EXPECT_NEAR(r.values.at(FitParameter::Scale), 3.0 * result_.values.at(FitParameter::Scale), 1e-3);
  EXPECT_NEAR(r.rss, 9.0 * result_.rss, 1e-3 * r.rss);
}

TEST_F(NoisyFit, GammaProfileHasSingleMinimum) {
  std::vector<double> g;
  for (int i = 0; i <= 12; ++i) g.push_back(kN2FittedGammaE - 6e-6 + i * 1e-6);
  auto p = problem(times_, data_);
  FitOptions fast;
  fast.restarts = 0;
  const auto prof = profile_parameter(p, FitParameter::GammaE, g, fast);
  ASSERT_EQ(prof.size(), g.size());
  const auto best = std::min_element(prof.begin(), prof.end(), [](auto& a, auto& b) { return a.rss < b.rss; });
  EXPECT_NEAR(best->value, kN2FittedGammaE, 1.5e-6);
  int direction_changes = 0;
  for (std::size_t i = 2; i < prof.size(); ++i) {
    const bool down0 = prof[i - 1].rss < prof[i - 2].rss;
    const bool down1 = prof[i].rss < prof[i - 1].rss;
    if (down0 != down1) ++direction_changes;
  }
  EXPECT_EQ(direction_changes, 1);
  EXPECT_GE(best->rss, result_.rss * (1.0 - 1e-6));
}

TEST(FitProfile, ScaleProfileIsQuadratic) {
  const auto t = grid(0.0, 200.0, 1.0);
  auto p = problem(t, noisy(model_signal(q_model(), kTruth, t), 0.02, 3));
  p.parameters.at(FitParameter::GammaE).free = false;
  p.parameters.at(FitParameter::GammaE).initial = kN2FittedGammaE;
  p.parameters.at(FitParameter::TauC).free = false;
  p.parameters.at(FitParameter::TauC).initial = 1000.0;
  const std::vector<double> s{1.0, 1.5, 2.0, 2.5, 3.0};
  const auto prof = profile_parameter(p, FitParameter::Scale, s);
  // Equal spacing: third differences of a quadratic vanish.
  for (std::size_t i = 3; i < prof.size(); ++i) {
    const double d3 = prof[i].rss - 3 * prof[i - 1].rss + 3 * prof[i - 2].rss - prof[i - 3].rss;
    EXPECT_NEAR(d3, 0.0, 1e-9 * prof[i].rss);
  }
  EXPECT_THROW(profile_parameter(p, FitParameter::GammaE, s), DomainError);
}

TEST(FitProfile, TruncatedDataConstrainsTauLess) {
  const auto full_t = grid(0.0, 1000.0, 1.0);
  const auto short_t = grid(0.0, 100.0, 0.2);
  auto full = problem(full_t, noisy(model_signal(q_model(), kTruth, full_t), 0.01, 11));
  auto trunc = problem(short_t, noisy(model_signal(q_model(), kTruth, short_t), 0.01, 11));
  for (auto* p : {&full, &trunc}) {
    p->parameters.at(FitParameter::GammaE).free = false;
    p->parameters.at(FitParameter::GammaE).initial = kN2FittedGammaE;
  }
  const auto a = fit(full);
  const auto b = fit(trunc);
  EXPECT_GT(b.uncertainties.at(FitParameter::TauC), 3.0 * a.uncertainties.at(FitParameter::TauC));

  auto rel_rise = [](const FitProblem& p, const FitResult& r) {
    const std::vector<double> g{700.0};
    return profile_parameter(p, FitParameter::TauC, g)[0].rss / r.rss - 1.0;
  };
  EXPECT_GT(rel_rise(full, a), 5.0 * rel_rise(trunc, b));
}

TEST(Fit, BetaEBelowNoise) {
  const auto t = grid(0.0, 1000.0, 1.0);
  const auto data = noisy(model_signal(q_model(), kTruth, t), 0.01, 5);
  auto base = problem(t, data);
  auto with_beta = base;
  with_beta.parameters.at(FitParameter::BetaE).free = true;
  FitOptions fast;
  fast.restarts = 1;
  const auto r0 = fit(base, fast);
  const auto r1 = fit(with_beta, fast);
  // One extra parameter buys at most a few noise variances of residual.
  EXPECT_LE(r1.rss, r0.rss * (1.0 + 1e-3));
  EXPECT_GT(r1.rss, r0.rss - 10.0 * 1e-4);
}
