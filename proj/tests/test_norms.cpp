#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "mdtgn/dirac.hpp"
#include "mdtgn/norms.hpp"

using namespace mdtgn;

namespace {

// Brute-force references written directly from the definitions, with the
// same trapezoid nodes but none of the library's line bookkeeping.

double brute_d(const std::function<double(long)>& sq, long lo, long hi, int k, double dt) {
  double best = 0.0;
  for (long s = lo - 2L * k; s <= hi; ++s) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += trapezoid_weight(j, k, dt) * sq(s + 2L * j);
    best = std::max(best, acc);
  }
  return std::sqrt(best);
}

double brute_d(const ComplexFunction& f, int k) {
  return brute_d([&](long i) { return std::norm(f.zero_extended(i)); }, 0, f.size() - 1, k, f.grid().dt);
}

/// sup over lines through (i0 - n, n) (plus) or (i0 + n, n) (minus).
double brute_x(const ComplexField& w, int sign) {
  const auto& g = w.grid();
  double best = 0.0;
  for (long i0 = -g.n_t; i0 < g.n_x + g.n_t; ++i0) {
    double acc = 0.0;
    for (int n = 0; n <= g.n_t; ++n) {
      acc += trapezoid_weight(n, g.n_t, g.dt) * std::norm(w.zero_extended(i0 - sign * n, n));
    }
    best = std::max(best, acc);
  }
  return std::sqrt(best);
}

/// p(y) = max_n |w(y + sign n, n)|, then its D(T) norm.
double brute_envelope(const ComplexField& w, int sign) {
  const auto& g = w.grid();
  const long lo = -g.n_t, hi = g.n_x + g.n_t;
  std::vector<double> p(static_cast<std::size_t>(hi - lo), 0.0);
  for (long y = lo; y < hi; ++y) {
    double m = 0.0;
    for (int n = 0; n <= g.n_t; ++n) m = std::max(m, std::abs(w.zero_extended(y + sign * n, n)));
    p[static_cast<std::size_t>(y - lo)] = m;
  }
  auto sq = [&](long y) {
    return (y < lo || y >= hi) ? 0.0 : p[static_cast<std::size_t>(y - lo)] * p[static_cast<std::size_t>(y - lo)];
  };
  return brute_d(sq, lo, hi - 1, g.n_t, g.dt);
}

/// Riemann sum with 10x the grid resolution of sup_x int_0^T |f(x+2s)|^2 ds.
double riemann_d(const std::function<Complex(double)>& f, double x_lo, double x_hi, double T, double dx) {
  const double h = dx / 10.0;
  double best = 0.0;
  for (double x = x_lo - 2 * T; x <= x_hi; x += h) {
    double acc = 0.0;
    for (double s = 0.5 * h; s < T; s += h) acc += h * std::norm(f(x + 2 * s));
    best = std::max(best, acc);
  }
  return std::sqrt(best);
}

ComplexFunction random_bumps(const LightConeGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> c(-0.25, 0.25), w(0.02, 0.06), a(0.2, 1.0), ph(0.0, 6.28);
  BumpSumSpec s;
  for (int k = 0; k < 4; ++k) s.bumps.push_back({c(rng), w(rng), a(rng), ph(rng)});
  return sample_function(g, s);
}

}  // namespace

TEST(DNorm, ConstantEqualsCSqrtT) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 64, 0.25);
  EXPECT_NEAR(d_norm(ComplexFunction(g, Complex(2.0)), 0.25), 1.0, 1e-13);
  EXPECT_EQ(d_norm(ComplexFunction(g), 0.25), 0.0);
}

TEST(DNorm, IndicatorMatchesAnalyticAndRiemannOracle) {
  const double dx = 1.0 / 64;
  const auto g = build_grid(-2.0, 2.0, dx, 0.5);
  const auto f = sample_function(g, IndicatorSpec{0.0, 1.0});
  const double d = d_norm(f, 0.5);
  EXPECT_NEAR(d, std::sqrt(0.5), 1e-12);
  const double oracle = riemann_d([](double x) { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; }, -2.0, 2.0, 0.5, dx);
  EXPECT_NEAR(d, oracle, 2 * dx);
}

TEST(DNorm, GaussianMatchesRiemannOracle) {
  const double dx = 1.0 / 128;
  const auto g = build_grid(-1.0, 1.0, dx, 0.25);
  const BumpSpec b{0.05, 0.05, 1.0, 0.0};
  const double d = d_norm(sample_function(g, b), 0.25);
  const double oracle = riemann_d([&](double x) { return evaluate_bump(b, x); }, -1.0, 1.0, 0.25, dx);
  EXPECT_NEAR(d, oracle, 1e-3 * oracle);
}

TEST(DNorm, MatchesBruteForce) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 64, 0.25);
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const auto f = random_bumps(g, s);
    EXPECT_NEAR(d_norm(f, 0.25), brute_d(f, g.n_t), 1e-14);
    EXPECT_NEAR(d_norm(f, 0.125), brute_d(f, g.n_t / 2), 1e-14);
  }
}

TEST(DNorm, EvenShiftInvarianceAndMonotoneInT) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 128, 0.25);
  const auto f = random_bumps(g, 11);
  ComplexFunction shifted(g);
  for (int i = 0; i < g.n_x; ++i) shifted[i] = f.zero_extended(i - 6);
  EXPECT_EQ(d_norm(f, 0.25), d_norm(shifted, 0.25));
  double prev = 0.0;
  for (int k = 1; k <= g.n_t; ++k) {
    const double d = d_norm(f, k * g.dt);
    EXPECT_GE(d, prev);
    prev = d;
  }
  EXPECT_THROW(d_norm(f, 0.3 * g.dt), Error);
}

TEST(XNorm, FreeSolutionEqualsDataNorm) {
  const auto g = build_grid(-1.5, 1.5, 1.0 / 128, 0.25);
  const auto f = random_bumps(g, 3), gg = random_bumps(g, 4);
  const auto h = free_solution(f, gg, g);
  const double df = d_norm(f, g.T), dg = d_norm(gg, g.T);
  EXPECT_NEAR(x_norm(h, Component::u), df, 1e-12 * df);
  EXPECT_NEAR(x_norm(h, Component::v), dg, 1e-12 * dg);
  EXPECT_NEAR(x_norm(h.u, Family::plus), brute_x(h.u, 1), 1e-14);
  EXPECT_NEAR(x_norm(h.v, Family::minus), brute_x(h.v, -1), 1e-14);
}

TEST(XNorm, ConstantAndZero) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 64, 0.25);
  const ComplexField c(g, Complex(0.0, 2.0));
  EXPECT_NEAR(x_norm(c, Family::plus), 2.0 * 0.5, 1e-13);
  EXPECT_NEAR(x_norm(c, Family::minus), 2.0 * 0.5, 1e-13);
  EXPECT_EQ(x_norm(ComplexField(g), Family::plus), 0.0);
}

TEST(Envelope, FreeSolutionProfileIsModulusOfData) {
  const auto g = build_grid(-1.5, 1.5, 1.0 / 128, 0.25);
  const auto f = random_bumps(g, 8);
  const auto h = free_solution(f, ComplexFunction(g), g);
  const auto r = envelope_norm(h, Component::u);
  ASSERT_TRUE(r.auxiliary.has_value());
  for (int i = 0; i < g.n_x; ++i) EXPECT_EQ((*r.auxiliary)[i], std::abs(f[i]));
  EXPECT_NEAR(r.value, d_norm(f, g.T), 1e-12 * r.value);
  EXPECT_NEAR(r.value, brute_envelope(h.u, 1), 1e-14);
}

TEST(Envelope, DampedTransportKeepsInitialProfile) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 64, 0.25);
  const auto f = random_bumps(g, 9);
  ComplexField u(g);
  for (int n = 0; n <= g.n_t; ++n) {
    for (int i = 0; i < g.n_x; ++i) u(i, n) = f.zero_extended(i - n) * std::exp(-g.t(n));
  }
  const auto r = envelope_norm(u, Family::plus);
  for (int i = 0; i < g.n_x; ++i) EXPECT_EQ((*r.auxiliary)[i], std::abs(f[i]));
  // v family: brute force on a generic field
  ComplexField v(g);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  for (int n = 0; n <= g.n_t; ++n) {
    for (int i = 40; i < 90; ++i) v(i, n) = {z(rng), z(rng)};
  }
  EXPECT_NEAR(envelope_value(v, Family::minus), brute_envelope(v, -1), 1e-13);
  EXPECT_NEAR(envelope_value(v, Family::plus), brute_envelope(v, 1), 1e-13);
}

TEST(Envelope, ConstantField) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 64, 0.25);
  EXPECT_NEAR(envelope_value(ComplexField(g, Complex(3.0)), Family::plus), 1.5, 1e-13);
}

TEST(NNorm, ConstantOneGivesTThreeHalves) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 64, 0.25);
  const ComplexField one(g, Complex(1.0));
  EXPECT_NEAR(n_norm(one, Family::plus), std::pow(0.25, 1.5), 1e-13);
  EXPECT_NEAR(n_norm(one, Family::minus), std::pow(0.25, 1.5), 1e-13);
  EXPECT_EQ(n_norm(ComplexField(g), Family::plus), 0.0);
}

TEST(NNorm, SingleLayerIsDtSqrtT) {
  for (double dx : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    const auto g = build_grid(-1.0, 1.0, dx, 0.25);
    ComplexField F(g);
    const int n0 = g.n_t / 2;
    for (int i = 0; i < g.n_x; ++i) F(i, n0) = 1.0;
    EXPECT_NEAR(n_norm(F, Family::plus), dx * std::sqrt(0.25), 1e-14);
  }
}

TEST(YNorm, FreeIsThreeTimesDataNorm) {
  const auto g = build_grid(-1.5, 1.5, 1.0 / 128, 0.25);
  const auto f = random_bumps(g, 21), gg = random_bumps(g, 22);
  const auto h = free_solution(f, gg, g);
  EXPECT_NEAR(y_norm(h, Component::u), 3 * d_norm(f, g.T), 3e-12 * d_norm(f, g.T));
  EXPECT_NEAR(y_norm(h, Component::v), 3 * d_norm(gg, g.T), 3e-12 * d_norm(gg, g.T));
  EXPECT_EQ(y_norm(ComplexField(g), Family::plus), 0.0);
  EXPECT_NEAR(y_norm(ComplexField(g, Complex(2.0)), Family::minus), 3 * 2 * 0.5, 1e-12);
}

TEST(YNorm, EnvelopeNormBoundedByY) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 64, 0.25);
  ComplexField w(g);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z;
  for (auto& x : w.values()) x = {z(rng), z(rng)};
  const double env = envelope_value(w, Family::plus);
  EXPECT_TRUE(std::isfinite(env));
  EXPECT_LE(env, y_norm(w, Family::plus));
  // the profile dominates the field along its own lines
  const auto p = envelope_profile(w, Family::plus);
  for (int n = 0; n <= g.n_t; ++n) {
    for (int i = 0; i < g.n_x; ++i) {
      EXPECT_LE(std::abs(w(i, n)), p[static_cast<std::size_t>(i - n + g.n_t)]);
    }
  }
}
