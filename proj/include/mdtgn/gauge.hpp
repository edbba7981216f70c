#pragma once
// Gauge transformations (u, v, A0, A1) -> (e^{iq chi} u, e^{iq chi} v, A0 - d_t chi, A1 - d_x chi)
// with chi a solution of the free wave equation. For the equations as
// implemented here the system is invariant for q = -lambda1.

#include <cmath>
#include <complex>
#include <string>

#include "mdtgn/dirac.hpp"
#include "mdtgn/lattice.hpp"
#include "mdtgn/maxwell.hpp"

namespace mdtgn {

struct GaugeField {
  RealField chi;
  RealFunction chi0;
  RealFunction chi1;
};

namespace detail {

/// Edge extension is exact only when the data is already constant on the
/// n_t nodes nearest each end.
inline void require_constant_margins(const RealFunction& f, int width, const char* name) {
  const int n = f.size();
  const double scale = std::max(1.0, f.sup_abs());
  const double tol = 1e-12 * scale;
  for (int k = 0; k <= std::min(width, n - 1); ++k) {
    if (std::abs(f[k] - f[0]) > tol || std::abs(f[n - 1 - k] - f[n - 1]) > tol) {
      throw Error(ErrorKind::SupportViolation,
                  std::string(name) + " is not constant within " + std::to_string(width) +
                      " nodes of the grid edge");
    }
  }
}

inline RealFunction cumulative_from_origin(const RealFunction& rho) {
  const auto& grid = rho.grid();
  RealFunction out(grid);
  const int anchor = grid.node_nearest(0.0);
  for (int i = anchor + 1; i < grid.n_x; ++i) out[i] = out[i - 1] + 0.5 * grid.dx * (rho[i - 1] + rho[i]);
  for (int i = anchor - 1; i >= 0; --i) out[i] = out[i + 1] - 0.5 * grid.dx * (rho[i] + rho[i + 1]);
  return out;
}

}  // namespace detail

/// chi(x,t) = (chi0(x+t) + chi0(x-t))/2 + 1/2 int_{x-t}^{x+t} chi1
inline GaugeField solve_wave(const RealFunction& chi0, const RealFunction& chi1,
                             const LightConeGrid& grid) {
  require_lattice(chi0.grid(), grid, "chi0");
  require_lattice(chi1.grid(), grid, "chi1");
  detail::require_constant_margins(chi0, grid.n_t, "chi0");
  detail::require_constant_margins(chi1, grid.n_t, "chi1");
  using Ext = detail::RangeIntegrator::Extension;
  const detail::RangeIntegrator c1(chi1.values(), grid.dx, grid.n_t + 1, Ext::edge);
  GaugeField gf{RealField(grid), chi0, chi1};
  for (int n = 0; n <= grid.n_t; ++n) {
    for (int i = 0; i < grid.n_x; ++i) {
      gf.chi(i, n) = 0.5 * (chi0.edge_extended(i + n) + chi0.edge_extended(i - n)) +
                     0.5 * c1.integral(i - n, i + n);
    }
  }
  return gf;
}

/// chi0 = int_0^x (a1 - a1'), chi1 = a0 - a0'; the new initial potentials are a0', a1'.
inline std::pair<RealFunction, RealFunction> gauge_targets(const RealFunction& a0,
                                                           const RealFunction& a1,
                                                           const RealFunction& a0_target,
                                                           const RealFunction& a1_target) {
  const auto& grid = a0.grid();
  RealFunction d1(grid), chi1(grid);
  for (int i = 0; i < grid.n_x; ++i) {
    d1[i] = a1[i] - a1_target[i];
    chi1[i] = a0[i] - a0_target[i];
  }
  return {detail::cumulative_from_origin(d1), chi1};
}

/// Centered differences inside, one-sided at the boundary rows and columns.
inline RealField time_derivative(const RealField& f) {
  const auto& g = f.grid();
  RealField out(g);
  for (int n = 0; n <= g.n_t; ++n) {
    for (int i = 0; i < g.n_x; ++i) {
      if (n == 0) out(i, n) = (f(i, 1) - f(i, 0)) / g.dt;
      else if (n == g.n_t) out(i, n) = (f(i, n) - f(i, n - 1)) / g.dt;
      else out(i, n) = (f(i, n + 1) - f(i, n - 1)) / (2.0 * g.dt);
    }
  }
  return out;
}

inline RealField space_derivative(const RealField& f) {
  const auto& g = f.grid();
  RealField out(g);
  for (int n = 0; n <= g.n_t; ++n) {
    for (int i = 0; i < g.n_x; ++i) {
      if (i == 0) out(i, n) = (f(1, n) - f(0, n)) / g.dx;
      else if (i == g.n_x - 1) out(i, n) = (f(i, n) - f(i - 1, n)) / g.dx;
      else out(i, n) = (f(i + 1, n) - f(i - 1, n)) / (2.0 * g.dx);
    }
  }
  return out;
}

/// `charge` is q in the spinor phase e^{i q chi}.
inline SolutionHistory gauge_transform(const SolutionHistory& sol, const GaugeField& gf,
                                       double charge = -1.0) {
  const auto& g = sol.grid();
  require_same_grid(gf.chi.grid(), g, "gauge field and solution on different grids");
  SolutionHistory out = sol;
  const auto dt_chi = time_derivative(gf.chi);
  const auto dx_chi = space_derivative(gf.chi);
  for (int n = 0; n <= g.n_t; ++n) {
    for (int i = 0; i < g.n_x; ++i) {
      const Complex phase = std::polar(1.0, charge * gf.chi(i, n));
      out.spinor.u(i, n) = phase * sol.spinor.u(i, n);
      out.spinor.v(i, n) = phase * sol.spinor.v(i, n);
      out.em.A0(i, n) = sol.em.A0(i, n) - dt_chi(i, n);
      out.em.A1(i, n) = sol.em.A1(i, n) - dx_chi(i, n);
    }
  }
  out.em.a0 = out.em.A0.layer_function(0);
  out.em.a1 = out.em.A1.layer_function(0);
  return out;
}

}  // namespace mdtgn
