#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mdtgn/estimates.hpp"

using namespace mdtgn;

namespace {

const CheckReport& get(const std::vector<CheckReport>& reps, const std::string& name) {
  const auto* r = find_report(reps, name);
  if (!r) throw std::runtime_error("missing report " + name);
  return *r;
}

RandomFieldSpec small_spec(std::uint64_t seed) {
  RandomFieldSpec s;
  s.seed = seed;
  s.grid = build_grid(-1.0, 1.0, 1.0 / 128, 0.25);
  return s;
}

}  // namespace

TEST(DataInequalities, IndicatorValues) {
  const double dx = 1.0 / 64;
  const auto g = build_grid(-2.0, 2.0, dx, 0.5);
  const auto f = sample_function(g, IndicatorSpec{0.0, 1.0});
  const auto reps = check_data_inequalities(f, 0.5, 0.0, 1.0);
  for (const auto& r : reps) EXPECT_TRUE(r.pass) << r.name;
  const auto& f1 = get(reps, "f1");
  EXPECT_NEAR(f1.lhs, std::sqrt(0.5), 1e-13);
  // the trapezoid picks up half a cell outside each end of [0, 1]
  EXPECT_NEAR(f1.rhs, std::sqrt(0.5 * (1.0 + dx)), 1e-13);
  // on [0, 1] with step 2 dx the squared L2 norm is exactly 1
  EXPECT_NEAR(get(reps, "f2").lhs, 1.0, 1e-13);
  EXPECT_NEAR(get(reps, "f2").rhs, std::sqrt(2.0) * std::sqrt(0.5), 1e-13);
  EXPECT_NEAR(get(reps, "f3").rhs, std::sqrt(2.0) * 2.0 * std::sqrt(0.5), 1e-13);
}

TEST(DataInequalities, ZeroDataIsTight) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 32, 0.25);
  for (const auto& r : check_data_inequalities(ComplexFunction(g), 0.25, 0.0, 0.5)) {
    EXPECT_TRUE(r.pass) << r.name;
    EXPECT_EQ(r.lhs, 0.0);
  }
}

TEST(DataInequalities, SmallTimeTrendOverNineLevels) {
  const auto g = build_grid(-1.0, 1.0, std::ldexp(1.0, -10), 0.25);
  const auto f = sample_function(g, BumpSpec{0.0, 0.05, 1.0, 0.0});
  const auto& trend = get(check_data_inequalities(f, 0.25, -0.25, 0.5), "L1_trend");
  EXPECT_TRUE(trend.pass);
  EXPECT_NE(trend.context.find("levels=9"), std::string::npos);
  // D(T/256) is about sqrt(T/256) sup|f|, far below D(T)
  EXPECT_NEAR(trend.lhs, std::sqrt(0.25 / 256), 1e-3);
  EXPECT_LT(trend.lhs, trend.rhs);  // rhs is D(T) / 5
}

TEST(DataInequalities, RejectsOffLatticeArguments) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 32, 0.25);
  const ComplexFunction f(g);
  EXPECT_THROW(check_data_inequalities(f, 0.25, 0.0, 1.0 / 32), Error);
  EXPECT_THROW(check_data_inequalities(f, 0.25, 0.01, 0.5), Error);
  EXPECT_THROW(check_data_inequalities(f, 0.01, 0.0, 0.5), Error);
}

TEST(Identities, HoldForSmoothData) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 128, 0.25);
  const auto f = sample_function(g, BumpSpec{0.05, 0.04, 0.7, 0.2});
  const auto gg = sample_function(g, BumpSumSpec{{{-0.1, 0.03, 0.5, 0.0}, {0.1, 0.05, 0.3, 2.0}}});
  const auto reps = check_identities(f, gg, 0.25);
  EXPECT_EQ(reps.size(), 21u);
  for (const auto& r : reps) EXPECT_TRUE(r.pass) << r.name << " " << r.lhs << " " << r.rhs;
  for (const auto& r : reps) {
    if (r.name == "KeyIdentity2_D" && r.context == "c=2") {
      EXPECT_NEAR(r.lhs, 1.0, 1e-13);
    }
  }
}

TEST(Lemma2, ZeroForcingIsEqualityAndRandomForcingHolds) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 64, 0.25);
  const auto f = sample_function(g, BumpSpec{0.0, 0.05, 1.0, 0.0});
  const auto gg = sample_function(g, BumpSpec{0.1, 0.05, 0.5, 1.0});
  const auto eq = check_lemma2(f, gg, ComplexField(g), ComplexField(g));
  for (const auto& r : eq) {
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.lhs, r.rhs, 1e-12 * r.rhs);
  }
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z;
  ComplexField G(g), F(g);
  for (auto& x : G.values()) x = {z(rng), z(rng)};
  for (auto& x : F.values()) x = {z(rng), z(rng)};
  for (const auto& r : check_lemma2(f, gg, G, F)) EXPECT_TRUE(r.pass) << r.name;
}

TEST(NullEstimates, ZeroAndConstantFields) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 32, 0.25);
  const ComplexField zero(g);
  for (const auto& r : check_null_estimates(zero, zero, zero, zero)) {
    EXPECT_TRUE(r.pass) << r.name;
    EXPECT_EQ(r.lhs, 0.0) << r.name;
  }
  const ComplexField one(g, Complex(1.0)), two(g, Complex(0.0, 2.0));
  for (const auto& r : check_null_estimates(one, two, two, one)) EXPECT_TRUE(r.pass) << r.name << " " << r.lhs << " " << r.rhs;
}

TEST(NullEstimates, RandomTrialsHold) {
  const auto spec = small_spec(5);
  for (std::uint64_t k = 0; k < 5; ++k) {
    for (const auto& r : run_trial(spec, k)) EXPECT_TRUE(r.pass) << r.name << " " << r.context;
  }
}

TEST(FreePotentialBound, ConstantFieldIsSharp) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 32, 0.5);
  const auto reps = check_free_potential_bound(RealFunction(g), RealFunction(g), RealFunction(g, 0.6), g);
  for (const auto& r : reps) {
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.lhs, 0.3, 1e-14);
    EXPECT_NEAR(r.rhs, 0.3, 1e-14);
  }
}

TEST(RandomSuite, DeterministicAcrossRunsAndThreads) {
  const auto spec = small_spec(42);
  const auto a = draw_trial(spec, 3), b = draw_trial(spec, 3);
  EXPECT_TRUE(a.u == b.u);
  EXPECT_TRUE(a.f == b.f);
  EXPECT_EQ(a.R, b.R);
  EXPECT_FALSE(draw_trial(spec, 4).u == a.u);

  const auto s1 = random_suite(spec, 10, 1);
  const auto s2 = random_suite(spec, 10, 3);
  EXPECT_EQ(s1.trials, 10);
  EXPECT_EQ(s1.violations, 0);
  EXPECT_TRUE(s1.summary.pass);
  ASSERT_EQ(s1.entries.size(), s2.entries.size());
  for (std::size_t k = 0; k < s1.entries.size(); ++k) {
    EXPECT_EQ(s1.entries[k].worst.name, s2.entries[k].worst.name);
    EXPECT_EQ(s1.entries[k].worst.lhs, s2.entries[k].worst.lhs);
    EXPECT_EQ(s1.entries[k].max_ratio, s2.entries[k].max_ratio);
  }
  EXPECT_THROW(random_suite(spec, 0), Error);
}

TEST(RandomSuite, RelativeMargin) {
  EXPECT_DOUBLE_EQ(relative_margin(check_le("x", 1.0, 2.0, 0, 0)), 0.5);
  EXPECT_DOUBLE_EQ(relative_margin(check_le("x", 3.0, 2.0, 0, 0)), -1.0 / 3.0);
  EXPECT_EQ(relative_margin(check_le("x", 0.0, 0.0, 0, 0)), 0.0);
}
