#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "rovib/analysis.hpp"
#include "rovib/errors.hpp"
#include "support.hpp"

using namespace rovib;
using rovib::testing::flat_lines;
using rovib::testing::n2_fitted;
using rovib::testing::revival_time;

namespace {

const CoherenceTrace& nitrogen_q_trace() {
  static const CoherenceTrace trace =
      signal_trace(flat_lines(n2_fitted(), 295.0, BranchingRatio::q_only()), DecayModel::none(), TraceGrid{});
  return trace;
}

bool has_match(const RevivalReport& r, ExtremumKind kind, int p, int q) {
  for (const auto& e : r.entries) {
    if (e.kind == kind && e.fraction && e.fraction->p == p && e.fraction->q == q &&
        std::abs(e.match_error_ps) <= 1.0) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST(Extrema, SineWave) {
  std::vector<double> t, y;
  for (int i = 0; i <= 2000; ++i) {
    t.push_back(i * 0.01);
    y.push_back(1.0 + std::sin(2.0 * std::numbers::pi * t.back() / 5.0));
  }
  const auto ex = detect_extrema(t, y, ExtremaOptions{0.05, 0.02, 0.25});
  ASSERT_EQ(ex.size(), 8u);
  for (std::size_t i = 0; i < ex.size(); ++i) {
    const bool peak = ex[i].kind == ExtremumKind::Peak;
    const double expected = peak ? 1.25 + 5.0 * (i / 2) : 3.75 + 5.0 * (i / 2);
    EXPECT_EQ(peak, i % 2 == 0);
    EXPECT_NEAR(ex[i].time_ps, expected, 0.011);
    EXPECT_NEAR(ex[i].center_ps, expected, 0.011);
  }
}

TEST(Extrema, DecayingExponentialHasNone) {
  std::vector<double> t, y;
  for (int i = 0; i <= 1000; ++i) {
    t.push_back(i * 0.5);
    y.push_back(std::exp(-t.back() / 100.0));
  }
  EXPECT_TRUE(detect_extrema(t, y).empty());
}

TEST(Extrema, ProminenceThreshold) {
  std::vector<double> t, y;
  for (int i = 0; i <= 1000; ++i) {
    t.push_back(i * 0.1);
    const double bump = 0.01 * std::exp(-std::pow((t.back() - 50.0) / 2.0, 2));
    y.push_back(1.0 + bump);
  }
  EXPECT_TRUE(detect_extrema(t, y, ExtremaOptions{0.5, 0.02, 0.25}).empty());
  const auto found = detect_extrema(t, y, ExtremaOptions{0.5, 0.005, 0.25});
  ASSERT_EQ(found.size(), 1u);
  EXPECT_NEAR(found[0].time_ps, 50.0, 0.1);
}

TEST(Revivals, FractionalStructureOfNitrogen) {
  const auto& tr = nitrogen_q_trace();
  const double period = revival_time(n2_fitted());
  const auto report = classify_fractions(detect_extrema(tr), period);
  for (auto [p, q] : {std::pair{1, 3}, {2, 3}, {1, 5}, {2, 5}, {3, 5}, {4, 5}, {1, 1}}) {
    EXPECT_TRUE(has_match(report, ExtremumKind::Peak, p, q)) << p << "/" << q;
  }
  for (auto [p, q] : {std::pair{1, 4}, {1, 2}, {3, 4}}) {
    EXPECT_TRUE(has_match(report, ExtremumKind::Dip, p, q)) << p << "/" << q;
  }
  ASSERT_TRUE(report.measured_revival_ps.has_value());
  EXPECT_NEAR(*report.measured_revival_ps, period, 0.5);
}

// Property: with prominence >= 2 %, matched peaks have odd denominators and,
// at q_max = 4, matched dips have denominator 2 or 4.
TEST(RevivalsProperty, DenominatorParity) {
  const auto& tr = nitrogen_q_trace();
  const double period = revival_time(n2_fitted());
  const auto ex = detect_extrema(tr);
  for (const auto& e : classify_fractions(ex, period, 9).entries) {
    if (e.kind == ExtremumKind::Peak && e.fraction) EXPECT_EQ(e.fraction->q % 2, 1) << e.time_ps;
  }
  for (const auto& e : classify_fractions(ex, period, 4).entries) {
    if (e.kind == ExtremumKind::Dip && e.fraction) {
      EXPECT_TRUE(e.fraction->q == 2 || e.fraction->q == 4) << e.time_ps << " " << e.fraction->str();
    }
  }
}

TEST(Revivals, MatchingRules) {
  std::vector<Extremum> ex(3);
  ex[0].time_ps = 50.0;   // 1/2 of 100
  ex[1].time_ps = 33.8;   // 1/3 within tolerance
  ex[2].time_ps = 71.0;   // 5/7 = 71.43, outside q_max = 5
  for (auto& e : ex) e.center_ps = e.time_ps;
  const auto r = classify_fractions(ex, 100.0, 5, 1.0);
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_EQ(r.entries[0].fraction->str(), "1/2");
  EXPECT_EQ(r.entries[1].fraction->str(), "1/3");
  EXPECT_NEAR(r.entries[1].match_error_ps, 33.8 - 100.0 / 3, 1e-12);
  // 71 is 0.43 from 5/7 but q_max = 5; the nearest admissible fraction is 3/4 = 75.
  EXPECT_FALSE(r.entries[2].fraction.has_value());
  std::vector<Extremum> full(1);
  full[0].time_ps = full[0].center_ps = 100.0;
  EXPECT_EQ(classify_fractions(full, 100.0).entries[0].fraction->str(), "1/1");
  EXPECT_THROW(classify_fractions(full, 0.0), DomainError);
}

TEST(Revivals, TieGoesToSmallerDenominator) {
  // 0.45 T is equidistant from 2/5 (0.40) and 1/2 (0.50).
  std::vector<Extremum> ex(1);
  ex[0].time_ps = ex[0].center_ps = 45.0;
  const auto r = classify_fractions(ex, 100.0, 5, 10.0);
  EXPECT_EQ(r.entries[0].fraction->str(), "1/2");
}

TEST(Dephasing, NitrogenRoomTemperature) {
  const auto tr =
      signal_trace(flat_lines(n2_fitted(), 295.0, BranchingRatio::q_only()), DecayModel::none(),
                   TraceGrid{0.0, 60.0, 0.01, std::nullopt});
  const auto t = dephasing_time(tr);
  ASSERT_TRUE(t.has_value());
  EXPECT_NEAR(*t, 7.5, 0.15);
  EXPECT_GT(*t, 5.0);
  EXPECT_LT(*t, 25.0);
}

TEST(Dephasing, ExponentialAndFlat) {
  std::vector<double> t, a, flat;
  for (int i = 0; i <= 4000; ++i) {
    t.push_back(i * 0.01);
    a.push_back(std::exp(-t.back() / 10.0));
    flat.push_back(1.0);
  }
  const auto d = dephasing_time(t, a, 0.05);
  ASSERT_TRUE(d.has_value());
  EXPECT_NEAR(*d, 10.0, 0.02);
  EXPECT_FALSE(dephasing_time(t, flat).has_value());
}

TEST(Burst, IsolatesFastFeature) {
  std::vector<double> t, y;
  for (int i = 0; i <= 2000; ++i) {
    t.push_back(i * 0.01);
    const double slow = std::exp(-t.back() / 8.0);
    const double fast = 0.05 * std::exp(-std::pow((t.back() - 8.4) / 0.08, 2));
    y.push_back(slow + fast);
  }
  const auto b = measure_burst(t, y, 8.4);
  EXPECT_NEAR(b.centroid_ps, 8.4, 0.02);
  EXPECT_GT(b.amplitude, 0.03);
  EXPECT_LT(b.amplitude, 0.05);
  const auto quiet = measure_burst(t, y, 15.0);
  EXPECT_LT(quiet.amplitude, 0.01 * b.amplitude);
  EXPECT_THROW(measure_burst(t, y, 40.0), DomainError);
}
