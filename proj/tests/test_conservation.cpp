#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mdtgn/conservation.hpp"
#include "mdtgn/dirac.hpp"

using namespace mdtgn;

namespace {

SpinorHistory free_bumps(const LightConeGrid& g) {
  const auto f = sample_function(g, BumpSpec{-0.05, 0.06, 0.9, 0.3});
  const auto gg = sample_function(g, BumpSpec{0.08, 0.05, 0.6, -1.0});
  return free_solution(f, gg, g);
}

}  // namespace

TEST(TotalCharge, GaussianValueAndExactConstancyUnderTransport) {
  const auto g = build_grid(-1.5, 1.5, 1.0 / 256, 0.25);
  // compact data: nothing is shifted off the lattice
  ComplexFunction f(g), gg(g);
  for (int i = 0; i < g.n_x; ++i) {
    if (std::abs(g.x(i)) > 0.6) continue;
    f[i] = evaluate_bump({-0.05, 0.06, 0.9, 0.3}, g.x(i));
    gg[i] = evaluate_bump({0.08, 0.05, 0.6, -1.0}, g.x(i));
  }
  const auto h = free_solution(f, gg, g);
  const double q0 = total_charge(h, 0);
  // int A^2 exp(-(x - c)^2 / s^2) = A^2 s sqrt(pi)
  const double exact = (0.81 * 0.06 + 0.36 * 0.05) * std::sqrt(std::numbers::pi);
  EXPECT_NEAR(q0, exact, 1e-12);
  // each component's integral is bitwise constant; the sum only to rounding
  // since |u|^2 and |v|^2 pair up at different nodes on each layer
  const double qu = l2_norm_squared(f), qv = l2_norm_squared(gg);
  for (int n = 0; n <= g.n_t; ++n) {
    EXPECT_EQ(l2_norm_squared(h.u.layer_function(n)), qu);
    EXPECT_EQ(l2_norm_squared(h.v.layer_function(n)), qv);
    EXPECT_NEAR(total_charge(h, n), q0, 1e-13 * q0);
  }
  EXPECT_THROW(total_charge(h, g.n_t + 1), Error);
}

TEST(Cone, GeometryAndOutsideGrid) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 16, 0.5);
  const auto c = make_cone(g, 0.25, 0.5);
  EXPECT_EQ(c.i0, 20);
  EXPECT_EQ(c.n0, 8);
  try {
    make_cone(g, 0.75, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConeOutsideGrid);
  }
  EXPECT_THROW(make_cone(g, 0.0, 0.75), Error);
}

TEST(Cone, ZeroSpinorIsExact) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 16, 0.5);
  const SpinorHistory h(g);
  for (const auto& r : cone_charge_report(h, make_cone(g, 0.0, 0.5), 0.25)) {
    EXPECT_TRUE(r.pass) << r.name;
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.rhs, 0.0);
  }
}

TEST(Cone, FreeTransportIdentitiesConverge) {
  std::vector<double> err1, err2;
  for (double dx : {1.0 / 64, 1.0 / 128, 1.0 / 256}) {
    const auto g = build_grid(-1.5, 1.5, dx, 0.25);
    const auto h = free_bumps(g);
    const auto cone = make_cone(g, 0.0, 0.25);
    const auto rep = cone_charge_report(h, cone, 0.125);
    for (const auto& r : rep) EXPECT_TRUE(r.pass) << r.name << " dx=" << dx;
    err1.push_back(std::abs(rep[0].lhs - rep[0].rhs));
    err2.push_back(std::abs(rep[2].lhs - rep[2].rhs));
    EXPECT_LE(rep[1].lhs, rep[1].rhs + rep[1].allowance);
  }
  EXPECT_LT(err1[2], err1[0] / 3);
  EXPECT_LT(err2[2], err2[0] / 3);
}

TEST(Cone, SliceBeyondApexIsRejected) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 16, 0.5);
  const SpinorHistory h(g);
  EXPECT_THROW(cone_charge_report(h, make_cone(g, 0.0, 0.25), 0.375), Error);
}

TEST(Gauss, LinearFieldWithUnitDensityIsExact) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 32, 0.25);
  RealFunction E(g);
  for (int i = 0; i < g.n_x; ++i) E[i] = 3.0 + g.x(i);
  const ComplexFunction u(g, Complex(0.6, 0.0)), v(g, Complex(0.0, 0.8));
  const auto r = gauss_residual(E, u, v);
  EXPECT_TRUE(r.report.pass);
  EXPECT_LT(r.report.lhs, 1e-12);
  EXPECT_EQ(r.field[0], 0.0);
  // a wrong field fails
  const auto bad = gauss_residual(RealFunction(g, 1.0), u, v);
  EXPECT_FALSE(bad.report.pass);
  EXPECT_NEAR(bad.report.lhs, 1.0, 1e-14);
}

TEST(Gauss, ConstraintFieldFromDataPasses) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 128, 0.25);
  // the centred residual is dx^2 rho'' / 4, about dx^2 / (2 s^2) at the peak
  const auto f = sample_function(g, BumpSpec{0.0, 0.1, 1.0, 0.0});
  const auto gg = sample_function(g, BumpSpec{0.1, 0.1, 0.5, 0.0});
  const auto r = gauss_residual(gauss_e0(f, gg, 0.5), f, gg);
  EXPECT_TRUE(r.report.pass) << r.report.lhs;
  auto rho = [](double x) { return std::exp(-x * x / 0.01) + 0.25 * std::exp(-(x - 0.1) * (x - 0.1) / 0.01); };
  double expect = 0.0;
  for (int i = 1; i + 1 < g.n_x; ++i) {
    expect = std::max(expect, std::abs(rho(g.x(i - 1)) - 2 * rho(g.x(i)) + rho(g.x(i + 1))) / 4);
  }
  EXPECT_NEAR(r.report.lhs, expect, 1e-12);
}

TEST(Delgado, RateExamples) {
  EXPECT_EQ(delgado_rate(0.5, 0.0, 3.0), 1.0);
  EXPECT_NEAR(delgado_rate(0.5, 1.0, 0.25), std::exp(1.0), 1e-15);
  EXPECT_NEAR(delgado_rate(0.5, -2.0, 0.125), std::exp(1.0), 1e-15);
  EXPECT_EQ(delgado_rate(0.0, 1.0, 10.0), 0.0);
}

TEST(Delgado, FreeMasslessDataSaturatesTheBound) {
  const auto g = build_grid(-1.5, 1.5, 1.0 / 128, 0.25);
  const auto h = free_bumps(g);
  const auto f = h.u.layer_function(0), gg = h.v.layer_function(0);
  const auto r = delgado_report(h, f, gg, 0.0, g.T, 0.0);
  EXPECT_TRUE(r.pass);
  // D is invariant under free transport with this horizon, so lhs equals rhs
  for (std::size_t n = 0; n < r.bound_lhs.size(); ++n) {
    EXPECT_NEAR(r.bound_lhs[n], r.bound_rhs[n], 1e-12 * r.bound_rhs[n]);
  }
  // phi+(x,t) = 4 int_0^t |g(x - t + 2s)|^2 ds <= 2 |g|^2
  EXPECT_LE(r.phi_plus.sup_abs(), 2.0 * l2_norm_squared(gg) + 1e-9);
  EXPECT_LE(r.phi_minus.sup_abs(), 2.0 * l2_norm_squared(f) + 1e-9);
  EXPECT_GT(r.phi_plus.sup_abs(), 0.0);
}

TEST(Delgado, InflatedHistoryFailsTheBound) {
  const auto g = build_grid(-1.5, 1.5, 1.0 / 64, 0.25);
  auto h = free_bumps(g);
  const auto f = h.u.layer_function(0), gg = h.v.layer_function(0);
  for (int i = 0; i < g.n_x; ++i) h.u(i, g.n_t) *= 1.5;
  const auto r = delgado_report(h, f, gg, 0.0, g.T, 0.0);
  EXPECT_FALSE(r.pass);
  const auto* d = find_report(r.reports, "Dbound");
  ASSERT_NE(d, nullptr);
  EXPECT_FALSE(d->pass);
}

TEST(FieldBounds, ConstantFieldIsSharp) {
  const auto g = build_grid(-1.0, 1.0, 1.0 / 32, 0.5);
  const SpinorHistory h(g);
  const auto pa = assemble_potentials(h, RealFunction(g), RealFunction(g), RealFunction(g, -0.4));
  const ComplexFunction zero(g);
  for (int n : {0, g.n_t / 2, g.n_t}) {
    const auto rep = field_bound_report(pa.em, zero, zero, n);
    ASSERT_EQ(rep.size(), 3u);
    for (const auto& r : rep) EXPECT_TRUE(r.pass) << r.name;
    EXPECT_NEAR(rep[1].lhs, rep[1].rhs, 1e-14);  // |A1| = t |E0|
    EXPECT_NEAR(rep[2].lhs, 0.4, 1e-15);
  }
  auto em = pa.em;
  em.A0(3, 4) = 10.0;
  EXPECT_FALSE(field_bound_report(em, zero, zero, 4)[0].pass);
  EXPECT_THROW(field_bound_report(em, zero, zero, -1), Error);
}
