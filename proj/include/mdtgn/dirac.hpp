#pragma once
// Spinor evolution for the coupled Maxwell-Dirac-Thirring-Gross-Neveu system
//
//   (d_t + d_x) u = -i m v + i l1 (A0+A1) u + 2i l2 |v|^2 u + 2i l3 Re(u conj v) v
//   (d_t - d_x) v = -i m u + i l1 (A0-A1) v + 2i l2 |u|^2 v + 2i l3 Re(u conj v) u
//
// and for the quadratic model
//
//   (d_t + d_x) u = -i m v + c1 |v|^2 + c2 u v
//   (d_t - d_x) v = -i m u + c3 |u|^2 + c4 u v.
//
// Two independent integrators are provided: a Picard iteration of the
// characteristic Duhamel map, and a Strang split-step (pointwise RK4
// reaction + exact transport). Both rebuild the potentials from the
// spinor history through the closed D'Alembert formulas.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdtgn/conservation.hpp"
#include "mdtgn/lattice.hpp"
#include "mdtgn/maxwell.hpp"
#include "mdtgn/norms.hpp"

namespace mdtgn {

enum class ModelKind { mdtgn, quadratic };

struct ModelParams {
  ModelKind kind = ModelKind::mdtgn;
  double m = 0.0;
  double lambda1 = 0.0;  ///< Maxwell coupling
  double lambda2 = 0.0;  ///< Thirring
  double lambda3 = 0.0;  ///< Gross-Neveu
  Complex c1{}, c2{}, c3{}, c4{};

  static ModelParams mdtgn(double m, double l1, double l2, double l3) {
    ModelParams p;
    p.kind = ModelKind::mdtgn;
    p.m = m;
    p.lambda1 = l1;
    p.lambda2 = l2;
    p.lambda3 = l3;
    p.validate();
    return p;
  }

  static ModelParams quadratic(double m, Complex c1, Complex c2, Complex c3, Complex c4) {
    ModelParams p;
    p.kind = ModelKind::quadratic;
    p.m = m;
    p.c1 = c1;
    p.c2 = c2;
    p.c3 = c3;
    p.c4 = c4;
    p.validate();
    return p;
  }

  void validate() const {
    if (!(m >= 0.0)) throw Error(ErrorKind::InvalidArgument, "mass must be nonnegative");
  }

  bool field_coupled() const { return kind == ModelKind::mdtgn && lambda1 != 0.0; }
};

enum class Scheme { picard, splitstep };

inline std::string_view scheme_name(Scheme s) { return s == Scheme::picard ? "picard" : "splitstep"; }

struct SolverConfig {
  double epsilon0 = 0.05;
  double picard_tol = 1e-10;
  int max_iter = 50;
  Scheme scheme = Scheme::picard;
  double pad = 0.0;
  bool strict_smallness = false;

  void validate() const {
    if (!(epsilon0 > 0.0) || !(picard_tol > 0.0) || max_iter < 1 || pad < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "solver config out of range");
    }
  }
};

/// Data for one initial value problem.
struct InitialData {
  ComplexFunction f;
  ComplexFunction g;
  RealFunction a0;
  RealFunction a1;
  RealFunction E0;
};

struct SmallnessCheck {
  double data_term = 0.0;   ///< D(T)^2 sum, or sqrt(T)(m + |f|_2 + |g|_2) for the quadratic model
  double field_term = 0.0;  ///< T(m + |a0| + |a1|) + T^2 |E0|; zero for the quadratic model
  double epsilon0 = 0.0;
  bool ok = true;
};

struct SolutionHistory {
  SpinorHistory spinor;
  EmHistory em;
  Scheme scheme = Scheme::picard;
  int iterations = 0;  ///< Picard sweeps (summed over segments)
  int restarts = 0;
  bool smallness_violated = false;
  std::vector<double> increments;  ///< Y-norm of successive Picard increments
  std::vector<int> segment_starts;  ///< first layer of each continuation segment
  double route_discrepancy = 0.0;

  const LightConeGrid& grid() const { return spinor.grid(); }
};

// ---------------------------------------------------------------------------
// Pointwise right-hand sides.

/// Time-derivative right sides (du, dv) of the two characteristic equations.
struct PointRhs {
  Complex du;
  Complex dv;
};

inline PointRhs dirac_rhs(Complex u, Complex v, double a_plus, double a_minus,
                          const ModelParams& p) {
  constexpr Complex I{0.0, 1.0};
  if (p.kind == ModelKind::quadratic) {
    return {-I * p.m * v + p.c1 * std::norm(v) + p.c2 * u * v,
            -I * p.m * u + p.c3 * std::norm(u) + p.c4 * u * v};
  }
  const double re_uv = (u * std::conj(v)).real();
  return {I * (-p.m * v + p.lambda1 * a_plus * u + 2.0 * p.lambda2 * std::norm(v) * u +
               2.0 * p.lambda3 * re_uv * v),
          I * (-p.m * u + p.lambda1 * a_minus * v + 2.0 * p.lambda2 * std::norm(u) * v +
               2.0 * p.lambda3 * re_uv * u)};
}

/// Forcing pair in the (d_t + d_x) u = i G, (d_t - d_x) v = i F convention.
struct ForcingLayer {
  std::vector<Complex> G;
  std::vector<Complex> F;
};

inline ForcingLayer rhs_eval(std::span<const Complex> u, std::span<const Complex> v,
                             std::span<const double> a_plus, std::span<const double> a_minus,
                             const ModelParams& p) {
  constexpr Complex I{0.0, 1.0};
  ForcingLayer out{std::vector<Complex>(u.size()), std::vector<Complex>(u.size())};
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double ap = a_plus.empty() ? 0.0 : a_plus[i];
    const double am = a_minus.empty() ? 0.0 : a_minus[i];
    const auto r = dirac_rhs(u[i], v[i], ap, am, p);
    out.G[i] = -I * r.du;
    out.F[i] = -I * r.dv;
  }
  return out;
}

/// One RK4 step of the transport-free system with frozen potentials.
inline std::pair<Complex, Complex> local_ode_step(Complex u0, Complex v0, double a_plus,
                                                  double a_minus, const ModelParams& p, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "ODE step needs dt > 0");
  const auto k1 = dirac_rhs(u0, v0, a_plus, a_minus, p);
  const auto k2 = dirac_rhs(u0 + 0.5 * dt * k1.du, v0 + 0.5 * dt * k1.dv, a_plus, a_minus, p);
  const auto k3 = dirac_rhs(u0 + 0.5 * dt * k2.du, v0 + 0.5 * dt * k2.dv, a_plus, a_minus, p);
  const auto k4 = dirac_rhs(u0 + dt * k3.du, v0 + dt * k3.dv, a_plus, a_minus, p);
  return {u0 + (dt / 6.0) * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du),
          v0 + (dt / 6.0) * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv)};
}

// ---------------------------------------------------------------------------
// Linear solution operators.

inline void require_lattice(const LightConeGrid& data, const LightConeGrid& grid, const char* what) {
  if (data.n_x != grid.n_x || data.x_min != grid.x_min || data.dx != grid.dx) {
    throw Error(ErrorKind::GridMismatch, std::string(what) + " is not on the solution lattice");
  }
}

/// u(x,t) = f(x-t), v(x,t) = g(x+t), by repeated exact shifts.
inline SpinorHistory free_solution(const ComplexFunction& f, const ComplexFunction& g,
                                   const LightConeGrid& grid, double pad = 0.0) {
  require_lattice(f.grid(), grid, "f");
  require_lattice(g.grid(), grid, "g");
  require_interior_support(f, grid.T, pad, "f");
  require_interior_support(g, grid.T, pad, "g");
  SpinorHistory h(grid);
  std::vector<Complex> u(f.values().begin(), f.values().end());
  std::vector<Complex> v(g.values().begin(), g.values().end());
  h.u.set_layer(0, u);
  h.v.set_layer(0, v);
  for (int n = 1; n <= grid.n_t; ++n) {
    transport_shift_inplace<Complex>(u, 1);
    transport_shift_inplace<Complex>(v, -1);
    h.u.set_layer(n, u);
    h.v.set_layer(n, v);
  }
  return h;
}

/// u(x,t) = f(x-t) + i int_0^t G(x-t+s, s) ds,
/// v(x,t) = g(x+t) + i int_0^t F(x+t-s, s) ds, trapezoid along the characteristics.
inline SpinorHistory duhamel_solve(const ComplexFunction& f, const ComplexFunction& g,
                                   const ComplexField& G, const ComplexField& F,
                                   const LightConeGrid& grid, double pad = 0.0) {
  require_lattice(f.grid(), grid, "f");
  require_lattice(g.grid(), grid, "g");
  require_same_grid(G.grid(), grid, "forcing G not on the solution grid");
  require_same_grid(F.grid(), grid, "forcing F not on the solution grid");
  require_interior_support(f, grid.T, pad, "f");
  require_interior_support(g, grid.T, pad, "g");
  constexpr Complex I{0.0, 1.0};
  const int nt = grid.n_t;
  const int nx = grid.n_x;
  SpinorHistory h(grid);
  // running sums along x - t = const (for u) and x + t = const (for v)
  std::vector<Complex> run_u(static_cast<std::size_t>(nx + nt)), first_u(run_u.size());
  std::vector<Complex> run_v(static_cast<std::size_t>(nx + nt)), first_v(run_v.size());
  for (int n = 0; n <= nt; ++n) {
    for (int i = 0; i < nx; ++i) {
      const auto cu = static_cast<std::size_t>(i - n + nt);
      const auto cv = static_cast<std::size_t>(i + n);
      const Complex gu = G(i, n);
      const Complex fv = F(i, n);
      run_u[cu] += gu;
      run_v[cv] += fv;
      if (n == 0) {
        first_u[cu] = gu;
        first_v[cv] = fv;
      }
      const Complex int_u = grid.dt * (run_u[cu] - 0.5 * first_u[cu] - 0.5 * gu);
      const Complex int_v = grid.dt * (run_v[cv] - 0.5 * first_v[cv] - 0.5 * fv);
      h.u(i, n) = f.zero_extended(i - n) + (n == 0 ? Complex{} : I * int_u);
      h.v(i, n) = g.zero_extended(i + n) + (n == 0 ? Complex{} : I * int_v);
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Nonlinear solvers.

inline SmallnessCheck smallness_check(const InitialData& d, const ModelParams& p, double T,
                                      double epsilon0) {
  SmallnessCheck c;
  c.epsilon0 = epsilon0;
  if (p.kind == ModelKind::quadratic) {
    c.data_term = std::sqrt(T) * (p.m + l2_norm(d.f) + l2_norm(d.g));
    c.field_term = 0.0;
    c.ok = c.data_term <= epsilon0;
    return c;
  }
  const double df = d_norm(d.f, T);
  const double dg = d_norm(d.g, T);
  c.data_term = df * df + dg * dg;
  c.field_term = T * (p.m + d.a0.sup_abs() + d.a1.sup_abs()) + T * T * d.E0.sup_abs();
  c.ok = c.data_term <= epsilon0 && c.field_term <= epsilon0;
  return c;
}

namespace detail {

inline void validate_inputs(const InitialData& d, const LightConeGrid& grid, const ModelParams& p,
                            const SolverConfig& config) {
  p.validate();
  config.validate();
  require_lattice(d.f.grid(), grid, "f");
  require_lattice(d.g.grid(), grid, "g");
  require_lattice(d.a0.grid(), grid, "a0");
  require_lattice(d.a1.grid(), grid, "a1");
  require_lattice(d.E0.grid(), grid, "E0");
  require_interior_support(d.f, grid.T, config.pad, "f");
  require_interior_support(d.g, grid.T, config.pad, "g");
}

inline bool check_smallness(const InitialData& d, const ModelParams& p, const LightConeGrid& grid,
                            const SolverConfig& config) {
  const auto c = smallness_check(d, p, grid.T, config.epsilon0);
  if (!c.ok && config.strict_smallness) {
    throw Error(ErrorKind::SmallnessViolated,
                "data term " + std::to_string(c.data_term) + ", field term " +
                    std::to_string(c.field_term) + " exceed epsilon0 " + std::to_string(c.epsilon0));
  }
  return !c.ok;
}

inline ComplexFunction on_grid(const ComplexFunction& f, const LightConeGrid& grid) {
  return ComplexFunction(grid, std::vector<Complex>(f.values().begin(), f.values().end()));
}
inline RealFunction on_grid(const RealFunction& f, const LightConeGrid& grid) {
  return RealFunction(grid, std::vector<double>(f.values().begin(), f.values().end()));
}

/// Potentials A0 +/- A1 seen by the current iterate.
struct PotentialPair {
  RealField plus;
  RealField minus;
};

inline PotentialPair potentials_for(const SpinorHistory& h, const RealField& free_plus,
                                    const RealField& free_minus) {
  PotentialPair out{free_plus, free_minus};
  const auto wu = w_apply(density_u(h));
  const auto wv = w_apply(density_v(h));
  auto ap = out.plus.values();
  auto am = out.minus.values();
  auto su = wu.values();
  auto sv = wv.values();
  for (std::size_t k = 0; k < ap.size(); ++k) {
    ap[k] -= sv[k];
    am[k] -= su[k];
  }
  return out;
}

inline ComplexField difference(const ComplexField& a, const ComplexField& b) {
  ComplexField out(a.grid());
  auto o = out.values();
  auto x = a.values();
  auto y = b.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = x[k] - y[k];
  return out;
}

inline EmHistory finish_em(const SpinorHistory& h, const InitialData& d, double* route) {
  auto assembly = assemble_potentials(h, on_grid(d.a0, h.grid()), on_grid(d.a1, h.grid()),
                                      on_grid(d.E0, h.grid()));
  if (route) *route = assembly.route_discrepancy;
  return std::move(assembly.em);
}

}  // namespace detail

/// Picard iteration of the Duhamel map, starting from the free solution,
/// until the summed Y+ x Y- norm of the increment drops below picard_tol.
inline SolutionHistory picard_solve(const InitialData& data, const ModelParams& params,
                                    const LightConeGrid& grid, const SolverConfig& config) {
  detail::validate_inputs(data, grid, params, config);
  SolutionHistory out;
  out.scheme = Scheme::picard;
  out.smallness_violated = detail::check_smallness(data, params, grid, config);
  out.segment_starts = {0};

  const auto f = detail::on_grid(data.f, grid);
  const auto g = detail::on_grid(data.g, grid);
  RealField free_plus, free_minus;
  if (params.field_coupled()) {
    free_plus = a_free(data.a0, data.a1, data.E0, grid, 1);
    free_minus = a_free(data.a0, data.a1, data.E0, grid, -1);
  }

  SpinorHistory current = free_solution(f, g, grid, config.pad);
  bool converged = false;
  for (int it = 1; it <= config.max_iter; ++it) {
    std::optional<detail::PotentialPair> pot;
    if (params.field_coupled()) pot = detail::potentials_for(current, free_plus, free_minus);
    ComplexField G(grid), F(grid);
    for (int n = 0; n <= grid.n_t; ++n) {
      const auto ap = pot ? pot->plus.layer(n) : std::span<const double>{};
      const auto am = pot ? pot->minus.layer(n) : std::span<const double>{};
      auto forcing = rhs_eval(current.u.layer(n), current.v.layer(n), ap, am, params);
      G.set_layer(n, forcing.G);
      F.set_layer(n, forcing.F);
    }
    SpinorHistory next = duhamel_solve(f, g, G, F, grid, config.pad);
    const double inc = y_norm(detail::difference(next.u, current.u), Family::plus) +
                       y_norm(detail::difference(next.v, current.v), Family::minus);
    out.increments.push_back(inc);
    current = std::move(next);
    out.iterations = it;
    if (!std::isfinite(inc)) break;
    if (inc < config.picard_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorKind::NonConvergence,
                "Picard increment " + std::to_string(out.increments.back()) + " after " +
                    std::to_string(out.iterations) + " iterations");
  }
  out.spinor = std::move(current);
  out.em = detail::finish_em(out.spinor, data, &out.route_discrepancy);
  return out;
}

/// Strang splitting: half reaction, exact transport, half reaction. The
/// potentials at layer n+1 only need densities at layers 0..n.
inline SolutionHistory splitstep_solve(const InitialData& data, const ModelParams& params,
                                       const LightConeGrid& grid, const SolverConfig& config) {
  detail::validate_inputs(data, grid, params, config);
  SolutionHistory out;
  out.scheme = Scheme::splitstep;
  out.smallness_violated = detail::check_smallness(data, params, grid, config);
  out.segment_starts = {0};

  const int nx = grid.n_x;
  const double half = 0.5 * grid.dt;
  SpinorHistory h(grid);
  std::vector<Complex> u(data.f.values().begin(), data.f.values().end());
  std::vector<Complex> v(data.g.values().begin(), data.g.values().end());
  h.u.set_layer(0, u);
  h.v.set_layer(0, v);

  const bool coupled = params.field_coupled();
  RealField free_plus, free_minus;
  std::optional<ConeIntegral> cone_u, cone_v;
  std::vector<double> ap(static_cast<std::size_t>(nx), 0.0), am(ap.size(), 0.0);
  std::vector<double> rho_u(ap.size()), rho_v(ap.size());
  if (coupled) {
    free_plus = a_free(data.a0, data.a1, data.E0, grid, 1);
    free_minus = a_free(data.a0, data.a1, data.E0, grid, -1);
    cone_u.emplace(grid);
    cone_v.emplace(grid);
    std::copy(free_plus.layer(0).begin(), free_plus.layer(0).end(), ap.begin());
    std::copy(free_minus.layer(0).begin(), free_minus.layer(0).end(), am.begin());
  }

  auto react = [&](double step) {
    for (int i = 0; i < nx; ++i) {
      const auto k = static_cast<std::size_t>(i);
      auto [un, vn] = local_ode_step(u[k], v[k], ap[k], am[k], params, step);
      u[k] = un;
      v[k] = vn;
    }
  };

  for (int n = 0; n < grid.n_t; ++n) {
    if (coupled) {
      for (int i = 0; i < nx; ++i) {
        const auto k = static_cast<std::size_t>(i);
        rho_u[k] = std::norm(u[k]);
        rho_v[k] = std::norm(v[k]);
      }
      cone_u->push(rho_u);
      cone_v->push(rho_v);
    }
    react(half);
    transport_shift_inplace<Complex>(u, 1);
    transport_shift_inplace<Complex>(v, -1);
    if (coupled) {
      const auto fp = free_plus.layer(n + 1);
      const auto fm = free_minus.layer(n + 1);
      const auto wu = cone_u->current();
      const auto wv = cone_v->current();
      for (std::size_t k = 0; k < ap.size(); ++k) {
        ap[k] = fp[k] - wv[k];
        am[k] = fm[k] - wu[k];
      }
    }
    react(half);
    h.u.set_layer(n + 1, u);
    h.v.set_layer(n + 1, v);
  }
  out.spinor = std::move(h);
  out.em = detail::finish_em(out.spinor, data, &out.route_discrepancy);
  return out;
}

inline SolutionHistory solve(const InitialData& data, const ModelParams& params,
                             const LightConeGrid& grid, const SolverConfig& config) {
  return config.scheme == Scheme::picard ? picard_solve(data, params, grid, config)
                                         : splitstep_solve(data, params, grid, config);
}

// ---------------------------------------------------------------------------
// Global continuation.

/// Spatial part of a grid; the time extent comes from the target time.
struct LatticeSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  double dx = 0.0;
};

struct ContinuationPlan {
  int segment_layers = 0;
  double M = 0.0;
  double rate = 0.0;
};

/// Largest grid-aligned restart interval satisfying
///   (D(f)^2 + D(g)^2) exp(r tau) <= eps0   and
///   T (m + 2|a0| + 2|a1| + 2 tau |E0| + tau M) <= eps0 / 2.
inline ContinuationPlan plan_continuation(const InitialData& d, const ModelParams& p,
                                          const LightConeGrid& grid, const SolverConfig& config) {
  ContinuationPlan plan;
  plan.M = l2_norm_squared(d.f) + l2_norm_squared(d.g);
  plan.rate = delgado_rate(p.m, p.lambda3, plan.M);
  const double tau = grid.T;
  const double growth = std::exp(plan.rate * tau);
  const double field_rate = p.m + 2.0 * d.a0.sup_abs() + 2.0 * d.a1.sup_abs() +
                            2.0 * tau * d.E0.sup_abs() + tau * plan.M;
  auto data_ok = [&](int k) {
    const double T = k * grid.dt;
    const double df = d_norm(d.f, T);
    const double dg = d_norm(d.g, T);
    return (df * df + dg * dg) * growth <= config.epsilon0;
  };
  int k_field = grid.n_t;
  if (field_rate > 0.0) {
    k_field = static_cast<int>(std::floor(0.5 * config.epsilon0 / (field_rate * grid.dt) + 1e-9));
    k_field = std::min(k_field, grid.n_t);
  }
  // D(T) is nondecreasing in T, so the data condition holds on an initial range of k.
  int lo = 0, hi = k_field;
  while (lo < hi) {
    const int mid = lo + (hi - lo + 1) / 2;
    if (data_ok(mid)) lo = mid; else hi = mid - 1;
  }
  plan.segment_layers = lo;
  return plan;
}

/// Repeated local solves on [0,T], [T,2T], ... up to tau = grid.T, each
/// restarted from the previous segment's final layer.
inline SolutionHistory global_solve(const InitialData& data, const ModelParams& params, double tau,
                                    const LatticeSpec& lattice, const SolverConfig& config) {
  if (params.kind != ModelKind::mdtgn) {
    throw Error(ErrorKind::InvalidArgument, "global continuation is defined for the MDTGN model");
  }
  params.validate();
  config.validate();
  const auto grid = build_grid(lattice.x_min, lattice.x_max, lattice.dx, tau);
  InitialData d{detail::on_grid(data.f, grid), detail::on_grid(data.g, grid),
                detail::on_grid(data.a0, grid), detail::on_grid(data.a1, grid),
                detail::on_grid(data.E0, grid)};
  const auto plan = plan_continuation(d, params, grid, config);
  if (plan.segment_layers < 1) {
    throw Error(ErrorKind::StepCollapse,
                "restart interval falls below dx (growth rate " + std::to_string(plan.rate) + ")");
  }

  SolutionHistory out;
  out.scheme = config.scheme;
  out.spinor = SpinorHistory(grid);
  out.em.A0 = RealField(grid);
  out.em.A1 = RealField(grid);
  out.em.E = RealField(grid);
  out.em.a0 = d.a0;
  out.em.a1 = d.a1;
  out.em.E0 = d.E0;

  InitialData seg = d;
  int start = 0;
  while (start < grid.n_t) {
    const int layers = std::min(plan.segment_layers, grid.n_t - start);
    const auto seg_grid = with_layers(grid, layers);
    InitialData local{detail::on_grid(seg.f, seg_grid), detail::on_grid(seg.g, seg_grid),
                      detail::on_grid(seg.a0, seg_grid), detail::on_grid(seg.a1, seg_grid),
                      detail::on_grid(seg.E0, seg_grid)};
    auto part = solve(local, params, seg_grid, config);
    out.segment_starts.push_back(start);
    out.iterations += part.iterations;
    out.smallness_violated = out.smallness_violated || part.smallness_violated;
    out.route_discrepancy = std::max(out.route_discrepancy, part.route_discrepancy);
    out.increments.insert(out.increments.end(), part.increments.begin(), part.increments.end());
    for (int n = (start == 0 ? 0 : 1); n <= layers; ++n) {
      out.spinor.u.set_layer(start + n, part.spinor.u.layer(n));
      out.spinor.v.set_layer(start + n, part.spinor.v.layer(n));
      out.em.A0.set_layer(start + n, part.em.A0.layer(n));
      out.em.A1.set_layer(start + n, part.em.A1.layer(n));
      out.em.E.set_layer(start + n, part.em.E.layer(n));
    }
    seg.f = part.spinor.u.layer_function(layers);
    seg.g = part.spinor.v.layer_function(layers);
    seg.a0 = part.em.A0.layer_function(layers);
    seg.a1 = part.em.A1.layer_function(layers);
    seg.E0 = part.em.E.layer_function(layers);
    start += layers;
  }
  out.restarts = static_cast<int>(out.segment_starts.size()) - 1;
  return out;
}

// ---------------------------------------------------------------------------
// Time reflection.

/// Data for evolving backwards: with x' = c - x about the lattice midpoint c
/// and t' = -t, conj(u), conj(v), A0, A1, -E solve the same system with the
/// quadratic couplings c_j replaced by -conj(c_j).
inline InitialData reflect_data(const InitialData& d) {
  const auto flip_c = [](const ComplexFunction& f) {
    ComplexFunction out(f.grid());
    const int n = f.size();
    for (int i = 0; i < n; ++i) out[i] = std::conj(f[n - 1 - i]);
    return out;
  };
  const auto flip_r = [](const RealFunction& f, double sign) {
    RealFunction out(f.grid());
    const int n = f.size();
    for (int i = 0; i < n; ++i) out[i] = sign * f[n - 1 - i];
    return out;
  };
  return {flip_c(d.f), flip_c(d.g), flip_r(d.a0, 1.0), flip_r(d.a1, 1.0), flip_r(d.E0, -1.0)};
}

inline ModelParams reflect_params(const ModelParams& p) {
  ModelParams out = p;
  if (p.kind == ModelKind::quadratic) {
    out.c1 = -std::conj(p.c1);
    out.c2 = -std::conj(p.c2);
    out.c3 = -std::conj(p.c3);
    out.c4 = -std::conj(p.c4);
  }
  return out;
}

}  // namespace mdtgn
