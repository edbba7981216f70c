#pragma once
// Charge conservation on the light-cone lattice and the a priori bounds used
// for global continuation.
//
//   rho = |u|^2 + |v|^2,  j = |u|^2 - |v|^2,  rho + j = 2|u|^2,  rho - j = 2|v|^2.
//
// Cone edges are node sequences, so every edge and slice integral is a plain
// trapezoid over grid samples.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mdtgn/lattice.hpp"
#include "mdtgn/maxwell.hpp"
#include "mdtgn/norms.hpp"
#include "mdtgn/report.hpp"

namespace mdtgn {

inline double total_charge(const SpinorHistory& h, int layer) {
  if (layer < 0 || layer > h.grid().n_t) throw Error(ErrorKind::InvalidArgument, "layer out of range");
  const auto u = h.u.layer(layer);
  const auto v = h.v.layer(layer);
  std::vector<double> rho(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) rho[i] = std::norm(u[i]) + std::norm(v[i]);
  return trapezoid(rho, h.grid().dx);
}

/// Backward cone Omega(x0, t0) = {0 <= s <= t0, |y - x0| <= t0 - s}.
struct ConeRegion {
  double x0 = 0.0;
  double t0 = 0.0;
  int i0 = 0;
  int n0 = 0;
};

inline ConeRegion make_cone(const LightConeGrid& g, double x0, double t0) {
  ConeRegion c{x0, t0, g.node_at(x0), g.steps(t0, "cone height")};
  if (c.n0 > g.n_t || c.i0 - c.n0 < 0 || c.i0 + c.n0 > g.n_x - 1) {
    throw Error(ErrorKind::ConeOutsideGrid,
                "cone at x0=" + std::to_string(x0) + ", t0=" + std::to_string(t0) + " leaves the grid");
  }
  return c;
}

/// Factor k in the quadrature allowance k * dx * (peak density in the cone).
struct ConeTolerance {
  double abs_tol = 1e-9;
  double dx_factor = 4.0;
};

namespace detail {

inline double slice_charge(const SpinorHistory& h, int n, int lo, int hi) {
  if (hi <= lo) return 0.0;
  std::vector<double> rho(static_cast<std::size_t>(hi - lo + 1));
  for (int i = lo; i <= hi; ++i) {
    rho[static_cast<std::size_t>(i - lo)] = std::norm(h.u(i, n)) + std::norm(h.v(i, n));
  }
  return trapezoid(rho, h.grid().dx);
}

/// int_0^{t_n} 2|u|^2 along the right edge plus 2|v|^2 along the left edge.
inline double edge_flux(const SpinorHistory& h, const ConeRegion& c, int n) {
  if (n == 0) return 0.0;
  std::vector<double> right(static_cast<std::size_t>(n + 1)), left(right.size());
  for (int k = 0; k <= n; ++k) {
    right[static_cast<std::size_t>(k)] = 2.0 * std::norm(h.u(c.i0 + c.n0 - k, k));
    left[static_cast<std::size_t>(k)] = 2.0 * std::norm(h.v(c.i0 - c.n0 + k, k));
  }
  return trapezoid(right, h.grid().dt) + trapezoid(left, h.grid().dt);
}

inline double cone_peak_density(const SpinorHistory& h, const ConeRegion& c) {
  double peak = 0.0;
  for (int n = 0; n <= c.n0; ++n) {
    for (int i = c.i0 - (c.n0 - n); i <= c.i0 + (c.n0 - n); ++i) {
      peak = std::max(peak, std::norm(h.u(i, n)) + std::norm(h.v(i, n)));
    }
  }
  return peak;
}

}  // namespace detail

/// LocalCharge (four-term identity at time t), LocalChargeBound (slice at t
/// against the base) and LocalCharge2 (edge flux up to the apex).
inline std::vector<CheckReport> cone_charge_report(const SpinorHistory& h, const ConeRegion& cone,
                                                   double t, const ConeTolerance& tol = {}) {
  const auto& g = h.grid();
  if (cone.n0 > g.n_t || cone.i0 - cone.n0 < 0 || cone.i0 + cone.n0 > g.n_x - 1) {
    throw Error(ErrorKind::ConeOutsideGrid, "cone does not fit this history");
  }
  const int n = g.steps(t, "slice time");
  if (n > cone.n0) throw Error(ErrorKind::InvalidArgument, "slice time beyond the cone apex");

  const double base = detail::slice_charge(h, 0, cone.i0 - cone.n0, cone.i0 + cone.n0);
  const double slice = detail::slice_charge(h, n, cone.i0 - (cone.n0 - n), cone.i0 + (cone.n0 - n));
  const double flux = detail::edge_flux(h, cone, n);
  const double apex_flux = detail::edge_flux(h, cone, cone.n0);
  const double allowance = tol.abs_tol + tol.dx_factor * g.dx * detail::cone_peak_density(h, cone);
  const std::string ctx = "x0=" + std::to_string(cone.x0) + " t0=" + std::to_string(cone.t0) +
                          " t=" + std::to_string(t);
  return {
      check_eq("LocalCharge", slice + flux, base, 1e-9, allowance, ctx),
      check_le("LocalChargeBound", slice, base, 1e-9, allowance, ctx),
      check_eq("LocalCharge2", apex_flux, base, 1e-9, allowance, ctx),
  };
}

struct GaussResidual {
  RealFunction field;  ///< zero at the two boundary nodes
  CheckReport report;
};

/// Centered d_x E minus |u|^2 + |v|^2 on interior nodes. The report passes
/// when the sup is within abs_tol + dx_factor * dx * sup(rho).
inline GaussResidual gauss_residual(const RealFunction& E, const ComplexFunction& u,
                                    const ComplexFunction& v, double dx_factor = 1.0,
                                    double abs_tol = 1e-9) {
  const auto& g = E.grid();
  if (u.size() != E.size() || v.size() != E.size()) {
    throw Error(ErrorKind::GridMismatch, "Gauss residual layers differ in length");
  }
  GaussResidual out{RealFunction(g), {}};
  double sup = 0.0, rho_max = 0.0;
  for (int i = 0; i < E.size(); ++i) rho_max = std::max(rho_max, std::norm(u[i]) + std::norm(v[i]));
  for (int i = 1; i + 1 < E.size(); ++i) {
    const double r = (E[i + 1] - E[i - 1]) / (2.0 * g.dx) - (std::norm(u[i]) + std::norm(v[i]));
    out.field[i] = r;
    sup = std::max(sup, std::abs(r));
  }
  out.report = check_le("Gauss", sup, 0.0, 0.0, abs_tol + dx_factor * g.dx * rho_max);
  return out;
}

// ---------------------------------------------------------------------------
// Delgado-Huh a priori bounds.

/// Growth rate r in D(t)^2 <= D(0)^2 exp(r t): 2 m exp(4 |l3| M), and 2 m
/// when the Gross-Neveu coupling is off.
inline double delgado_rate(double m, double lambda3, double M) {
  if (lambda3 == 0.0) return 2.0 * m;
  return 2.0 * m * std::exp(4.0 * std::abs(lambda3) * M);
}

struct DelgadoReport {
  double M = 0.0;
  RealField phi_plus;   ///< int_0^t 4|v(x-t+s,s)|^2 ds
  RealField phi_minus;  ///< int_0^t 4|u(x+t-s,s)|^2 ds
  std::vector<double> bound_lhs;  ///< D(u_n)^2 + D(v_n)^2 per layer
  std::vector<double> bound_rhs;  ///< (D(f)^2 + D(g)^2) exp(r t_n)
  std::vector<CheckReport> reports;
  bool pass = true;
};

struct DelgadoTolerance {
  double phi_abs = 1e-6;
  double bound_rel = 1e-9;
  double bound_abs = 1e-12;
};

/// `T` is the D(T) horizon of the bound; `lambda3` selects the rate
/// (1 reproduces exp(2 m e^{4M} t)).
inline DelgadoReport delgado_report(const SpinorHistory& h, const ComplexFunction& f,
                                    const ComplexFunction& g, double m, double T,
                                    double lambda3 = 1.0, const DelgadoTolerance& tol = {}) {
  const auto& grid = h.grid();
  DelgadoReport r;
  r.M = l2_norm_squared(f) + l2_norm_squared(g);
  r.phi_plus = detail::partial_line_integrals(
      grid, false, [&](int i, int n) { return 4.0 * std::norm(h.v(i, n)); });
  r.phi_minus = detail::partial_line_integrals(
      grid, true, [&](int i, int n) { return 4.0 * std::norm(h.u(i, n)); });
  r.reports.push_back(check_le("phi_plus", r.phi_plus.sup_abs(), 2.0 * r.M, 0.0, tol.phi_abs));
  r.reports.push_back(check_le("phi_minus", r.phi_minus.sup_abs(), 2.0 * r.M, 0.0, tol.phi_abs));

  const int k = grid.steps(T, "D(T) horizon");
  const double rate = delgado_rate(m, lambda3, r.M);
  const double df = d_norm(f, T), dg = d_norm(g, T);
  const double d0 = df * df + dg * dg;
  CheckReport worst;
  double worst_slack = 0.0;
  for (int n = 0; n <= grid.n_t; ++n) {
    const double du = layer_d_norm(h.u, n, k), dv = layer_d_norm(h.v, n, k);
    const double lhs = du * du + dv * dv;
    const double rhs = d0 * std::exp(rate * grid.t(n));
    r.bound_lhs.push_back(lhs);
    r.bound_rhs.push_back(rhs);
    auto c = check_le("Dbound", lhs, rhs, tol.bound_rel, tol.bound_abs,
                      "worst layer t=" + std::to_string(grid.t(n)));
    const double slack = c.margin + c.allowance;
    if (n == 0 || slack < worst_slack) {
      worst = c;
      worst_slack = slack;
    }
  }
  r.reports.push_back(worst);
  r.pass = all_pass(r.reports);
  return r;
}

/// Abound for A0 and A1, and Ebound, at one layer. The allowance is
/// rel 1e-9 plus dx_factor * dx * (M + sup rho(., 0)).
inline std::vector<CheckReport> field_bound_report(const EmHistory& em, const ComplexFunction& f,
                                                   const ComplexFunction& g, int layer,
                                                   double dx_factor = 1.0) {
  const auto& grid = em.grid();
  if (layer < 0 || layer > grid.n_t) throw Error(ErrorKind::InvalidArgument, "layer out of range");
  const double M = l2_norm_squared(f) + l2_norm_squared(g);
  double rho0 = 0.0;
  for (int i = 0; i < f.size(); ++i) rho0 = std::max(rho0, std::norm(f[i]) + std::norm(g[i]));
  const double t = grid.t(layer);
  const double a_rhs = em.a0.sup_abs() + em.a1.sup_abs() + t * em.E0.sup_abs() + 0.5 * t * M;
  const double e_rhs = em.E0.sup_abs() + 0.5 * M;
  auto layer_sup = [&](const RealField& F) {
    double s = 0.0;
    for (double x : F.layer(layer)) s = std::max(s, std::abs(x));
    return s;
  };
  const double allowance = dx_factor * grid.dx * (M + rho0);
  const std::string ctx = "t=" + std::to_string(t);
  return {
      check_le("Abound_A0", layer_sup(em.A0), a_rhs, 1e-9, allowance, ctx),
      check_le("Abound_A1", layer_sup(em.A1), a_rhs, 1e-9, allowance, ctx),
      check_le("Ebound", layer_sup(em.E), e_rhs, 1e-9, allowance, ctx),
  };
}

}  // namespace mdtgn
