#pragma once
// Scenario descriptions, grid-refinement studies and the verification
// bundle run on a finished solution. Shared by the command-line tool and the
// acceptance suite.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <optional>
#include <string>
#include <vector>

#include "mdtgn/conservation.hpp"
#include "mdtgn/dirac.hpp"
#include "mdtgn/gauge.hpp"
#include "mdtgn/lattice.hpp"
#include "mdtgn/maxwell.hpp"
#include "mdtgn/report.hpp"

namespace mdtgn {

/// Initial data by description. Without an explicit E0 the field is built
/// from the Gauss law with constant kappa.
struct DataSpec {
  FunctionSpec f = ZeroSpec{};
  FunctionSpec g = ZeroSpec{};
  FunctionSpec a0 = ZeroSpec{};
  FunctionSpec a1 = ZeroSpec{};
  std::optional<FunctionSpec> E0;
  double kappa = 0.0;
};

struct Scenario {
  std::string name;
  ModelParams params;
  double x_min = -2.0;
  double x_max = 2.0;
  double T = 0.125;
  DataSpec data;
  SolverConfig config;
};

inline InitialData make_initial_data(const DataSpec& d, const LightConeGrid& grid) {
  InitialData out;
  out.f = sample_function(grid, d.f);
  out.g = sample_function(grid, d.g);
  out.a0 = sample_real(grid, d.a0);
  out.a1 = sample_real(grid, d.a1);
  out.E0 = d.E0 ? sample_real(grid, *d.E0) : gauss_e0(out.f, out.g, d.kappa);
  return out;
}

/// Small-data full MDTGN run used by the refinement studies.
inline Scenario small_mdtgn_scenario() {
  Scenario s;
  s.name = "small_mdtgn";
  s.params = ModelParams::mdtgn(0.2, 1.0, 1.0, 1.0);
  s.data.f = BumpSpec{0.0, 0.1, 0.3, 0.0};
  s.data.g = BumpSpec{0.1, 0.1, 0.3, 0.5};
  s.data.a0 = BumpSpec{-0.2, 0.2, 0.1, 0.0};
  s.data.a1 = BumpSpec{0.3, 0.2, 0.05, 0.0};
  return s;
}

// ---------------------------------------------------------------------------
// Refinement studies.

/// Least-squares slope of log(error) against log(dx).
inline double fit_order(const std::vector<double>& dx, const std::vector<double>& err) {
  if (dx.size() != err.size() || dx.size() < 2) throw Error(ErrorKind::InvalidArgument, "order fit needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(dx.size());
  for (std::size_t k = 0; k < dx.size(); ++k) {
    if (!(err[k] > 0.0) || !std::isfinite(err[k])) return std::nan("");
    const double x = std::log(dx[k]), y = std::log(err[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct ConvergenceStudy {
  std::string name;
  std::vector<double> dx;
  std::vector<double> error;
  double order = 0.0;
  CheckReport report;  ///< order >= min_order
};

inline ConvergenceStudy finish_study(std::string name, std::vector<double> dx, std::vector<double> err,
                                     double min_order) {
  ConvergenceStudy s{std::move(name), std::move(dx), std::move(err), 0.0, {}};
  s.order = fit_order(s.dx, s.error);
  std::string ctx = "errors=[";
  for (std::size_t k = 0; k < s.error.size(); ++k) ctx += (k ? "," : "") + detail::fmt(s.error[k]);
  ctx += "]";
  // the report reads "min_order <= fitted order"
  s.report = check_le(s.name + "_order", min_order, s.order, 0.0, 0.0, ctx);
  return s;
}

inline const std::vector<double>& default_refinements() {
  static const std::vector<double> dxs{std::ldexp(1.0, -7), std::ldexp(1.0, -8), std::ldexp(1.0, -9)};
  return dxs;
}

struct RefinedRun {
  LightConeGrid grid;
  InitialData data;
  SolutionHistory sol;
};

inline RefinedRun run_scenario(const Scenario& s, double dx) {
  const auto grid = build_grid(s.x_min, s.x_max, dx, s.T);
  auto data = make_initial_data(s.data, grid);
  auto sol = solve(data, s.params, grid, s.config);
  return {grid, std::move(data), std::move(sol)};
}

/// 50 cones (10 apex positions x 5 heights) on the coarsest lattice of the study.
inline std::vector<std::pair<double, double>> study_cones(const Scenario& s, double coarse_dx) {
  std::vector<std::pair<double, double>> cones;
  const int n_coarse = static_cast<int>(std::lround(s.T / coarse_dx));
  const int heights[] = {n_coarse / 4, 3 * n_coarse / 8, n_coarse / 2, 3 * n_coarse / 4, n_coarse};
  for (int k = 0; k < 10; ++k) {
    const double x0 = (-40 + 9 * k) * coarse_dx;
    for (int h : heights) {
      if (h > 0) cones.emplace_back(x0, 2 * (h / 2) * coarse_dx);
    }
  }
  return cones;
}

struct ConeStudy {
  ConvergenceStudy local_charge;
  ConvergenceStudy local_charge2;
  bool bounds_pass = true;  ///< every LocalChargeBound report passed
  int cones = 0;
};

/// Max |residual| of the cone identities over the study cones; the
/// four-term identity is sampled at t = 0, t0/2 and t0.
inline ConeStudy cone_identity_study(const Scenario& s, const std::vector<double>& dxs = default_refinements(),
                                     double min_order = 0.8) {
  const auto cones = study_cones(s, dxs.front());
  std::vector<double> e1, e2;
  bool bounds = true;
  for (double dx : dxs) {
    const auto run = run_scenario(s, dx);
    double r1 = 0.0, r2 = 0.0;
    for (const auto& [x0, t0] : cones) {
      const auto cone = make_cone(run.grid, x0, t0);
      for (double t : {0.0, 0.5 * t0, t0}) {
        const auto reps = cone_charge_report(run.sol.spinor, cone, t);
        r1 = std::max(r1, std::abs(reps[0].lhs - reps[0].rhs));
        r2 = std::max(r2, std::abs(reps[2].lhs - reps[2].rhs));
        bounds = bounds && reps[1].pass;
      }
    }
    e1.push_back(r1);
    e2.push_back(r2);
  }
  ConeStudy out;
  out.local_charge = finish_study("LocalCharge", dxs, e1, min_order);
  out.local_charge2 = finish_study("LocalCharge2", dxs, e2, min_order);
  out.bounds_pass = bounds;
  out.cones = static_cast<int>(cones.size());
  return out;
}

struct LorenzStudy {
  ConvergenceStudy consistent;
  std::vector<double> control;  ///< residual sup with E0 = 0
  CheckReport control_report;   ///< 10 x finest consistent <= finest control
};

inline LorenzStudy lorenz_study(const Scenario& s, const std::vector<double>& dxs = default_refinements(),
                                double min_order = 0.8) {
  Scenario control = s;
  control.data.E0 = ZeroSpec{};
  std::vector<double> good, bad;
  for (double dx : dxs) {
    const auto a = run_scenario(s, dx);
    good.push_back(lorenz_residual(a.sol.spinor, a.data.E0).sup);
    const auto b = run_scenario(control, dx);
    bad.push_back(lorenz_residual(b.sol.spinor, b.data.E0).sup);
  }
  LorenzStudy out;
  out.consistent = finish_study("Lorenz", dxs, good, min_order);
  out.control = bad;
  out.control_report = check_le("Lorenz_negative_control", 10.0 * good.back(), bad.back(), 0.0, 0.0,
                                "finest consistent=" + detail::fmt(good.back()) +
                                    " finest control=" + detail::fmt(bad.back()));
  return out;
}

/// Gauss residual at the final layer.
inline ConvergenceStudy gauss_study(const Scenario& s, const std::vector<double>& dxs = default_refinements(),
                                    double min_order = 0.8) {
  std::vector<double> err;
  for (double dx : dxs) {
    const auto run = run_scenario(s, dx);
    const int n = run.grid.n_t;
    err.push_back(gauss_residual(run.sol.em.E.layer_function(n), run.sol.spinor.u.layer_function(n),
                                 run.sol.spinor.v.layer_function(n))
                      .report.lhs);
  }
  return finish_study("Gauss", dxs, err, min_order);
}

inline double sup_difference(const ComplexField& a, const ComplexField& b) {
  double s = 0.0;
  auto x = a.values();
  auto y = b.values();
  for (std::size_t k = 0; k < x.size(); ++k) s = std::max(s, std::abs(x[k] - y[k]));
  return s;
}

inline double sup_modulus_difference(const ComplexField& a, const ComplexField& b) {
  double s = 0.0;
  auto x = a.values();
  auto y = b.values();
  for (std::size_t k = 0; k < x.size(); ++k) s = std::max(s, std::abs(std::abs(x[k]) - std::abs(y[k])));
  return s;
}

inline double sup_difference(const RealField& a, const RealField& b) {
  double s = 0.0;
  auto x = a.values();
  auto y = b.values();
  for (std::size_t k = 0; k < x.size(); ++k) s = std::max(s, std::abs(x[k] - y[k]));
  return s;
}

struct CrossSchemeStudy {
  ConvergenceStudy agreement;
  std::vector<double> increments;  ///< Picard trace on the finest grid
  CheckReport geometric;            ///< every ratio inc[k]/inc[k-1] below 1
};

inline CrossSchemeStudy cross_scheme_study(const Scenario& s, const std::vector<double>& dxs = default_refinements(),
                                           double min_order = 0.8) {
  Scenario pic = s, split = s;
  pic.config.scheme = Scheme::picard;
  split.config.scheme = Scheme::splitstep;
  std::vector<double> err;
  CrossSchemeStudy out;
  for (double dx : dxs) {
    const auto a = run_scenario(pic, dx);
    const auto b = run_scenario(split, dx);
    err.push_back(sup_difference(a.sol.spinor.u, b.sol.spinor.u) + sup_difference(a.sol.spinor.v, b.sol.spinor.v));
    out.increments = a.sol.increments;
  }
  out.agreement = finish_study("PicardVsSplitstep", dxs, err, min_order);
  double worst = 0.0;
  for (std::size_t k = 1; k < out.increments.size(); ++k) {
    worst = std::max(worst, out.increments[k] / out.increments[k - 1]);
  }
  out.geometric = check_le("Picard_geometric", worst, 1.0, 0.0, 0.0,
                           "iterations=" + std::to_string(out.increments.size()));
  out.geometric.pass = out.geometric.pass && worst < 1.0;
  return out;
}

struct GaugeRuns {
  SolutionHistory transformed;  ///< run 1 after the gauge transformation
  SolutionHistory direct;       ///< run 2 solved in the target gauge
};

/// Run 1 with (a0, a1); run 2 with target potentials (a0', a1') and the
/// spinor data rotated by e^{i q chi0}, q = -lambda1.
inline GaugeRuns gauge_two_run(const Scenario& s, double dx, const FunctionSpec& a0_target = ZeroSpec{},
                               const FunctionSpec& a1_target = ZeroSpec{}) {
  const auto run1 = run_scenario(s, dx);
  const auto& grid = run1.grid;
  const auto a0p = sample_real(grid, a0_target);
  const auto a1p = sample_real(grid, a1_target);
  const auto [chi0, chi1] = gauge_targets(run1.data.a0, run1.data.a1, a0p, a1p);
  const auto gf = solve_wave(chi0, chi1, grid);
  const double q = -s.params.lambda1;
  InitialData d2 = run1.data;
  d2.a0 = a0p;
  d2.a1 = a1p;
  for (int i = 0; i < grid.n_x; ++i) {
    const Complex phase = std::polar(1.0, q * chi0[i]);
    d2.f[i] *= phase;
    d2.g[i] *= phase;
  }
  GaugeRuns out{gauge_transform(run1.sol, gf, q), solve(d2, s.params, grid, s.config)};
  return out;
}

struct GaugeStudy {
  ConvergenceStudy moduli;
  ConvergenceStudy electric;
};

inline GaugeStudy gauge_study(const Scenario& s, const std::vector<double>& dxs = default_refinements(),
                              double min_order = 0.8, const FunctionSpec& a0_target = ZeroSpec{},
                              const FunctionSpec& a1_target = ZeroSpec{}) {
  std::vector<double> em, ee;
  for (double dx : dxs) {
    const auto r = gauge_two_run(s, dx, a0_target, a1_target);
    em.push_back(sup_modulus_difference(r.transformed.spinor.u, r.direct.spinor.u) +
                 sup_modulus_difference(r.transformed.spinor.v, r.direct.spinor.v));
    ee.push_back(sup_difference(r.transformed.em.E, r.direct.em.E));
  }
  return {finish_study("Gauge_moduli", dxs, em, min_order), finish_study("Gauge_E", dxs, ee, min_order)};
}

// ---------------------------------------------------------------------------
// Long-time and model-specific runs.

/// Massless pure Thirring with two Gaussians carrying total charge about 0.5.
/// |u|^2 and |v|^2 are transported exactly along their characteristics.
inline Scenario thirring_transport_scenario() {
  Scenario s;
  s.name = "massless_thirring";
  s.params = ModelParams::mdtgn(0.0, 0.0, 1.0, 0.0);
  s.x_min = -3.5;
  s.x_max = 3.5;
  s.T = 1.0;
  const double amp = std::sqrt(0.25 / (0.1 * std::sqrt(std::numbers::pi)));
  s.data.f = BumpSpec{-0.2, 0.1, amp, 0.0};
  s.data.g = BumpSpec{0.2, 0.1, amp, 1.0};
  s.data.E0 = ZeroSpec{};
  s.config.scheme = Scheme::splitstep;
  return s;
}

struct TransportCheck {
  double charge_drift = 0.0;   ///< max_n |Q(n) - Q(0)| / Q(0)
  double moduli_error = 0.0;   ///< max | |u(i,n)| - |f(i-n)| | and the same for v
  std::vector<CheckReport> reports;
};

inline TransportCheck transport_check(const SolutionHistory& sol, const InitialData& d,
                                      double drift_tol = 1e-8, double moduli_tol = 1e-10) {
  const auto& h = sol.spinor;
  const auto& g = h.grid();
  TransportCheck c;
  const double q0 = total_charge(h, 0);
  for (int n = 0; n <= g.n_t; ++n) {
    c.charge_drift = std::max(c.charge_drift, std::abs(total_charge(h, n) - q0) / q0);
    for (int i = 0; i < g.n_x; ++i) {
      c.moduli_error = std::max(c.moduli_error, std::abs(std::abs(h.u(i, n)) - std::abs(d.f.zero_extended(i - n))));
      c.moduli_error = std::max(c.moduli_error, std::abs(std::abs(h.v(i, n)) - std::abs(d.g.zero_extended(i + n))));
    }
  }
  c.reports.push_back(check_le("ChargeDrift_rel", c.charge_drift, drift_tol, 0.0, 0.0, "Q0=" + detail::fmt(q0)));
  c.reports.push_back(check_le("ModuliTransport", c.moduli_error, moduli_tol, 0.0, 0.0));
  return c;
}

/// Massive Thirring coupled to Maxwell, Gauss-consistent field, run to tau = T.
inline Scenario global_thirring_maxwell_scenario() {
  Scenario s;
  s.name = "global_thirring_maxwell";
  s.params = ModelParams::mdtgn(0.1, 1.0, 1.0, 0.0);
  s.x_min = -7.5;
  s.x_max = 7.5;
  s.T = 5.0;
  const double amp = std::sqrt(0.02 / (0.2 * std::sqrt(std::numbers::pi)));  // M = 0.04
  s.data.f = BumpSpec{-0.25, 0.2, amp, 0.0};
  s.data.g = BumpSpec{0.25, 0.2, amp, 0.7};
  s.data.kappa = 0.0;
  return s;
}

struct GlobalCheck {
  SolutionHistory sol;
  InitialData data;
  std::vector<CheckReport> reports;
  std::vector<double> dbound_lhs;  ///< per layer
  std::vector<double> dbound_rhs;
};

/// Continuation run plus the a priori bounds at every layer: phi+-, (Dbound)
/// with the restart interval as the D horizon, (Abound) and (Ebound).
inline GlobalCheck global_check(const Scenario& s, double dx) {
  const auto grid = build_grid(s.x_min, s.x_max, dx, s.T);
  GlobalCheck c;
  c.data = make_initial_data(s.data, grid);
  c.sol = global_solve(c.data, s.params, s.T, LatticeSpec{s.x_min, s.x_max, dx}, s.config);
  const int seg = c.sol.segment_starts.size() > 1 ? c.sol.segment_starts[1] : grid.n_t;
  const auto dr = delgado_report(c.sol.spinor, c.data.f, c.data.g, s.params.m, seg * dx, s.params.lambda3);
  c.reports = dr.reports;
  c.dbound_lhs = dr.bound_lhs;
  c.dbound_rhs = dr.bound_rhs;
  CheckReport worst[3];
  double slack[3] = {0, 0, 0};
  for (int n = 0; n <= grid.n_t; ++n) {
    const auto fb = field_bound_report(c.sol.em, c.data.f, c.data.g, n);
    for (int k = 0; k < 3; ++k) {
      const double sl = fb[k].margin + fb[k].allowance;
      if (n == 0 || sl < slack[k]) {
        worst[k] = fb[k];
        slack[k] = sl;
      }
    }
  }
  for (auto& w : worst) c.reports.push_back(w);
  c.reports.push_back(check_le("Restarts", 1.0, static_cast<double>(c.sol.restarts), 0.0, 0.0,
                               "segment layers=" + std::to_string(seg)));
  return c;
}

/// The five coupling patterns of the quadratic model.
inline std::vector<std::pair<std::string, ModelParams>> quadratic_patterns(double m) {
  const Complex a{0.8, 0.6}, b{-0.6, 0.8}, z{};
  return {
      {"c1", ModelParams::quadratic(m, a, z, z, z)},
      {"c2", ModelParams::quadratic(m, z, a, z, z)},
      {"c3", ModelParams::quadratic(m, z, z, a, z)},
      {"c4", ModelParams::quadratic(m, z, z, z, a)},
      {"mixed", ModelParams::quadratic(m, a, b, std::conj(a), std::conj(b))},
  };
}

/// Seeded spinor data scaled so that sqrt(T)(m + |f|_2 + |g|_2) = fraction * eps0.
inline InitialData random_quadratic_data(const LightConeGrid& grid, double m, double eps0, double fraction,
                                         std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{seed, stream, std::uint64_t{0x51ab}};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> center(-0.2, 0.2), width(0.03, 0.06), phase(0.0, 2.0 * std::numbers::pi),
      amp(0.5, 1.0);
  auto draw = [&] {
    BumpSumSpec spec;
    const int n = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < n; ++k) spec.bumps.push_back(BumpSpec{center(rng), width(rng), amp(rng), phase(rng)});
    return sample_function(grid, spec);
  };
  InitialData d{draw(), draw(), RealFunction(grid), RealFunction(grid), RealFunction(grid)};
  const double budget = fraction * eps0 / std::sqrt(grid.T) - m;
  if (!(budget > 0.0)) throw Error(ErrorKind::InvalidArgument, "mass alone exceeds the smallness budget");
  const double scale = budget / (l2_norm(d.f) + l2_norm(d.g));
  for (int i = 0; i < grid.n_x; ++i) {
    d.f[i] *= scale;
    d.g[i] *= scale;
  }
  return d;
}

struct QuadraticTrial {
  std::string pattern;
  std::uint64_t seed = 0;
  double smallness = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string failure;
};

inline std::vector<QuadraticTrial> quadratic_suite(double dx = std::ldexp(1.0, -8), double T = 0.0625,
                                                   double m = 0.1, int seeds = 10) {
  const auto grid = build_grid(-1.0, 1.0, dx, T);
  SolverConfig cfg;
  std::vector<QuadraticTrial> out;
  for (const auto& [name, params] : quadratic_patterns(m)) {
    for (int s = 1; s <= seeds; ++s) {
      QuadraticTrial t;
      t.pattern = name;
      t.seed = static_cast<std::uint64_t>(s);
      const auto d = random_quadratic_data(grid, m, cfg.epsilon0, 0.8, t.seed, out.size());
      t.smallness = smallness_check(d, params, T, cfg.epsilon0).data_term;
      try {
        const auto sol = picard_solve(d, params, grid, cfg);
        t.iterations = sol.iterations;
        t.converged = true;
      } catch (const Error& e) {
        t.failure = e.what();
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification bundle for one finished run.

struct VerifyOptions {
  int cone_stride = 0;       ///< apex spacing in nodes (0: about 16 apexes across the data)
  double gauss_factor = 1.0;
};

inline std::vector<CheckReport> verification_reports(const SolutionHistory& sol, const InitialData& data,
                                                     const ModelParams& params, const VerifyOptions& opt = {}) {
  const auto& h = sol.spinor;
  const auto& g = h.grid();
  std::vector<CheckReport> out;

  const double q0 = total_charge(h, 0);
  double drift = 0.0;
  for (int n = 0; n <= g.n_t; ++n) drift = std::max(drift, std::abs(total_charge(h, n) - q0));
  const bool conserving = params.kind == ModelKind::mdtgn;
  if (conserving) {
    out.push_back(check_le("ChargeDrift", drift, 0.0, 0.0, 1e-9 + g.dx * g.dx * std::max(q0, 1e-300),
                           "Q0=" + detail::fmt(q0)));

    // cones with apex on the top layer, spread across the domain
    const int height = g.n_t;
    const int stride = opt.cone_stride > 0 ? opt.cone_stride : std::max(1, (g.n_x - 2 * height) / 16);
    for (int i0 = height; i0 + height <= g.n_x - 1; i0 += stride) {
      const auto cone = make_cone(g, g.x(i0), g.t(height));
      for (int n : {0, height / 2, height}) {
        for (auto& r : cone_charge_report(h, cone, g.t(n))) out.push_back(std::move(r));
      }
    }
  }
  if (params.kind == ModelKind::mdtgn) {
    for (int n : {0, g.n_t}) {
      auto gr = gauss_residual(sol.em.E.layer_function(n), h.u.layer_function(n), h.v.layer_function(n),
                               opt.gauss_factor);
      gr.report.name = n == 0 ? "Gauss_initial" : "Gauss_final";
      out.push_back(gr.report);
    }
    const auto lor = lorenz_residual(h, data.E0);
    double rho_max = 0.0;
    for (int i = 0; i < g.n_x; ++i) rho_max = std::max(rho_max, std::norm(data.f[i]) + std::norm(data.g[i]));
    out.push_back(check_le("Lorenz", lor.sup, 0.0, 0.0, 1e-9 + g.dx * rho_max));
    out.push_back(check_le("PotentialRoutes", sol.route_discrepancy, 0.0, 0.0, 1e-12));
    for (int n = 0; n <= g.n_t; ++n) {
      for (auto& r : field_bound_report(sol.em, data.f, data.g, n)) {
        if (n == g.n_t || !r.pass) out.push_back(std::move(r));
      }
    }
    const auto dr = delgado_report(h, data.f, data.g, params.m, g.T, params.lambda3);
    out.insert(out.end(), dr.reports.begin(), dr.reports.end());
  }
  return out;
}

}  // namespace mdtgn
