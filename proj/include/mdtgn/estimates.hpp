#pragma once
// Executable versions of the data inequalities, the norm identities for free
// solutions, the linear estimate for the Duhamel map, and the null-form,
// Minkowski, potential and local-integrability bounds.
//
// All sides are evaluated with the same trapezoid rules as the norms, so
// most of these hold exactly on the lattice and are checked at 1e-9 relative.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "mdtgn/dirac.hpp"
#include "mdtgn/lattice.hpp"
#include "mdtgn/maxwell.hpp"
#include "mdtgn/norms.hpp"
#include "mdtgn/report.hpp"

namespace mdtgn {

inline constexpr double kEstimateRelTol = 1e-9;
inline constexpr double kIdentityRelTol = 1e-12;

namespace detail {

/// L2 norm over [x_a, x_a + 2 m dx] from the samples x_a, x_a + 2dx, ...
/// (trapezoid with step 2dx, zero outside the grid).
template <class T>
double l2_interval_step2(const GridFunction<T>& f, long ia, long m) {
  std::vector<double> sq(static_cast<std::size_t>(m + 1));
  for (long j = 0; j <= m; ++j) sq[static_cast<std::size_t>(j)] = modulus_squared(f.zero_extended(ia + 2 * j));
  return std::sqrt(trapezoid(sq, 2.0 * f.grid().dx));
}

}  // namespace detail

/// f1, f2 (on [a, a+2T]), f3 (on [a, a+R]) and the small-T trend of D(T)
/// over T 2^{-k}, k = 0..8 (as far as T 2^{-k} stays a whole number of steps).
inline std::vector<CheckReport> check_data_inequalities(const ComplexFunction& f, double T,
                                                        double a, double R) {
  const auto& g = f.grid();
  const int k = g.steps(T, "T");
  if (k < 1) throw Error(ErrorKind::NonCommensurate, "T must span at least one step");
  const long ia = g.node_at(a);
  const double m_real = R / (2.0 * g.dx);
  const long m = std::lround(m_real);
  if (m < 1 || std::abs(m_real - static_cast<double>(m)) > kCommensurateTol) {
    throw Error(ErrorKind::NonCommensurate, "R must be a positive multiple of 2 dx");
  }
  const double d = d_norm(f, T);
  const std::string ctx = "T=" + detail::fmt(T) + " a=" + detail::fmt(a) + " R=" + detail::fmt(R);

  std::vector<CheckReport> out;
  out.push_back(check_le("f1", d, std::sqrt(0.5) * l2_norm(f), kIdentityRelTol, 0.0, ctx));
  out.push_back(check_le("f2", detail::l2_interval_step2(f, ia, k), std::sqrt(2.0) * d,
                         kIdentityRelTol, 0.0, ctx));
  out.push_back(check_le("f3", detail::l2_interval_step2(f, ia, m),
                         std::sqrt(2.0) * (1.0 + R / (2.0 * T)) * d, kIdentityRelTol, 0.0, ctx));

  std::vector<double> trend{d};
  int steps = k;
  while (trend.size() < 9 && steps % 2 == 0) {
    steps /= 2;
    trend.push_back(d_norm(f, steps * g.dt));
  }
  bool monotone = true;
  for (std::size_t j = 1; j < trend.size(); ++j) {
    monotone = monotone && trend[j] <= trend[j - 1] * (1.0 + kIdentityRelTol);
  }
  const bool full = trend.size() == 9;
  std::string seq;
  for (double v : trend) seq += (seq.empty() ? "" : ",") + detail::fmt(v);
  auto trend_report = check_le("L1_trend", trend.back(), full ? 0.2 * trend.front() : trend.front(),
                               0.0, 0.0, ctx + " levels=" + std::to_string(trend.size()) + " D=[" + seq + "]");
  trend_report.pass = trend_report.pass && monotone;
  out.push_back(trend_report);
  return out;
}

/// Free-solution identities: X = envelope = D for both families, the
/// constant-field values c sqrt(T), and Y = 3 D.
inline std::vector<CheckReport> check_identities(const ComplexFunction& f, const ComplexFunction& g,
                                                 double T) {
  const int k = f.grid().steps(T, "T");
  const auto grid = with_layers(f.grid(), k);
  const auto h = free_solution(detail::on_grid(f, grid), detail::on_grid(g, grid), grid);
  const double df = d_norm(f, T), dg = d_norm(g, T);
  std::vector<CheckReport> out;
  auto eq = [&](const char* name, double lhs, double rhs, const std::string& ctx = {}) {
    out.push_back(check_eq(name, lhs, rhs, kIdentityRelTol, 0.0, ctx));
  };
  eq("KeyIdentity1_X+", x_norm(h.u, Family::plus), df);
  eq("KeyIdentity1_Env+", envelope_value(h.u, Family::plus), df);
  eq("KeyIdentity1_X-", x_norm(h.v, Family::minus), dg);
  eq("KeyIdentity1_Env-", envelope_value(h.v, Family::minus), dg);
  for (double c : {0.5, 1.0, 2.0}) {
    const std::string ctx = "c=" + detail::fmt(c);
    const double target = c * std::sqrt(T);
    const ComplexField cf(grid, Complex(c, 0.0));
    eq("KeyIdentity2_D", d_norm(ComplexFunction(grid, Complex(c, 0.0)), T), target, ctx);
    eq("KeyIdentity2_X+", x_norm(cf, Family::plus), target, ctx);
    eq("KeyIdentity2_X-", x_norm(cf, Family::minus), target, ctx);
    eq("KeyIdentity2_Env+", envelope_value(cf, Family::plus), target, ctx);
    eq("KeyIdentity2_Env-", envelope_value(cf, Family::minus), target, ctx);
  }
  eq("Lemma2_free_u", y_norm(h.u, Family::plus), 3.0 * df);
  eq("Lemma2_free_v", y_norm(h.v, Family::minus), 3.0 * dg);
  return out;
}

/// Y+(u) <= 3 D(f) + 3 N+(G) and Y-(v) <= 3 D(g) + 3 N-(F) for the Duhamel solution.
inline std::vector<CheckReport> check_lemma2(const ComplexFunction& f, const ComplexFunction& g,
                                             const ComplexField& G, const ComplexField& F,
                                             double pad = 0.0) {
  const auto& grid = G.grid();
  const auto h = duhamel_solve(f, g, G, F, grid, pad);
  return {
      check_le("Lemma2_u", y_norm(h.u, Family::plus),
               3.0 * d_norm(f, grid.T) + 3.0 * n_norm(G, Family::plus), kEstimateRelTol, 0.0),
      check_le("Lemma2_v", y_norm(h.v, Family::minus),
               3.0 * d_norm(g, grid.T) + 3.0 * n_norm(F, Family::minus), kEstimateRelTol, 0.0),
  };
}

namespace detail {

inline ComplexField product(const ComplexField& a, const ComplexField& b) {
  ComplexField out(a.grid());
  auto o = out.values();
  auto x = a.values();
  auto y = b.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] = x[k] * y[k];
  return out;
}

/// sum_s w_s ||w(., s)||_{D(T)}
inline double integrated_layer_d_norm(const ComplexField& w) {
  const auto& g = w.grid();
  const auto norms = layer_d_norms(w);
  double s = 0.0;
  for (int n = 0; n <= g.n_t; ++n) s += trapezoid_weight(n, g.n_t, g.dt) * norms[static_cast<std::size_t>(n)];
  return s;
}

/// sup |W(u v)| with W applied to the real and imaginary parts.
inline double w_product_sup(const ComplexField& u, const ComplexField& v) {
  const auto& g = u.grid();
  RealField re(g), im(g);
  auto pu = u.values();
  auto pv = v.values();
  auto r = re.values();
  auto i = im.values();
  for (std::size_t k = 0; k < r.size(); ++k) {
    const Complex z = pu[k] * pv[k];
    r[k] = z.real();
    i[k] = z.imag();
  }
  const auto wr = w_apply(re);
  const auto wi = w_apply(im);
  double s = 0.0;
  auto a = wr.values();
  auto b = wi.values();
  for (std::size_t k = 0; k < a.size(); ++k) s = std::max(s, std::hypot(a[k], b[k]));
  return s;
}

/// sup over a of int_a^{a+T} int_0^T |v|^2 |u| dt dx (trapezoid in both).
inline double drem_lhs(const ComplexField& u, const ComplexField& v) {
  const auto& g = u.grid();
  std::vector<double> column(static_cast<std::size_t>(g.n_x), 0.0);
  for (int n = 0; n <= g.n_t; ++n) {
    const double w = trapezoid_weight(n, g.n_t, g.dt);
    for (int i = 0; i < g.n_x; ++i) column[static_cast<std::size_t>(i)] += w * std::norm(v(i, n)) * std::abs(u(i, n));
  }
  const RangeIntegrator window(column, g.dx, g.n_t + 1, RangeIntegrator::Extension::zero);
  double best = 0.0;
  for (long a = -g.n_t; a < g.n_x; ++a) best = std::max(best, window.integral(a, a + g.n_t));
  return best;
}

}  // namespace detail

/// Null-form estimates for u, u' (+ family) and v, v' (- family), the
/// Minkowski chain N <= int D <= T Y, the bound on W(uv) and the
/// local-integrability bound for |v|^2 |u|.
inline std::vector<CheckReport> check_null_estimates(const ComplexField& u, const ComplexField& up,
                                                     const ComplexField& v, const ComplexField& vp) {
  const auto& g = u.grid();
  require_same_grid(up.grid(), g, "u' not on the grid of u");
  require_same_grid(v.grid(), g, "v not on the grid of u");
  require_same_grid(vp.grid(), g, "v' not on the grid of u");
  const double T = g.T;
  const double sT = std::sqrt(T);
  const double xu = x_norm(u, Family::plus), xup = x_norm(up, Family::plus);
  const double xv = x_norm(v, Family::minus), xvp = x_norm(vp, Family::minus);
  const double eu = envelope_value(u, Family::plus);
  const double ev = envelope_value(v, Family::minus);
  using detail::product;

  std::vector<CheckReport> out;
  auto le = [&](const char* name, double lhs, double rhs) {
    out.push_back(check_le(name, lhs, rhs, kEstimateRelTol, 0.0));
  };
  le("Lemma3_vvu", n_norm(product(product(v, vp), u), Family::plus), xv * xvp * eu);
  le("Lemma3_uuv", n_norm(product(product(u, up), v), Family::minus), xu * xup * ev);
  le("Lemma3_vv", n_norm(product(v, vp), Family::plus), sT * xv * xvp);
  le("Lemma3_vu", n_norm(product(v, u), Family::plus), sT * xv * eu);
  le("Lemma3_uu", n_norm(product(u, up), Family::minus), sT * xu * xup);
  le("Lemma3_uv", n_norm(product(u, v), Family::minus), sT * xu * ev);
  le("Lemma3_v", n_norm(v, Family::plus), T * xv);
  le("Lemma3_u", n_norm(u, Family::minus), T * xu);

  for (const auto* w : {&u, &v}) {
    const bool is_u = w == &u;
    const double integrated = detail::integrated_layer_d_norm(*w);
    const double y = std::min(y_norm(*w, Family::plus), y_norm(*w, Family::minus));
    out.push_back(check_le(is_u ? "Nineq_N+_u" : "Nineq_N+_v", n_norm(*w, Family::plus), integrated,
                           kEstimateRelTol, 0.0));
    out.push_back(check_le(is_u ? "Nineq_N-_u" : "Nineq_N-_v", n_norm(*w, Family::minus), integrated,
                           kEstimateRelTol, 0.0));
    out.push_back(check_le(is_u ? "Nineq_TY_u" : "Nineq_TY_v", integrated, T * y, kEstimateRelTol, 0.0));
  }

  const auto du = layer_d_norms(u);
  const auto dv = layer_d_norms(v);
  double w_rhs = 0.0;
  for (int n = 0; n <= g.n_t; ++n) {
    w_rhs += trapezoid_weight(n, g.n_t, g.dt) * du[static_cast<std::size_t>(n)] * dv[static_cast<std::size_t>(n)];
  }
  le("Lemma4_W", detail::w_product_sup(u, v), 2.0 * w_rhs);
  le("Drem", detail::drem_lhs(u, v), 2.0 * sT * eu * xv * xv);
  return out;
}

/// sup |A+-free| <= |a0|_inf + |a1|_inf + T |E0|_inf
inline std::vector<CheckReport> check_free_potential_bound(const RealFunction& a0,
                                                           const RealFunction& a1,
                                                           const RealFunction& E0,
                                                           const LightConeGrid& grid) {
  const double rhs = a0.sup_abs() + a1.sup_abs() + grid.T * E0.sup_abs();
  return {
      check_le("Lemma4_Afree+", a_free(a0, a1, E0, grid, 1).sup_abs(), rhs, kEstimateRelTol, 0.0),
      check_le("Lemma4_Afree-", a_free(a0, a1, E0, grid, -1).sup_abs(), rhs, kEstimateRelTol, 0.0),
  };
}

// ---------------------------------------------------------------------------
// Seeded random sweeps.

struct RandomFieldSpec {
  std::uint64_t seed = 1;
  int max_bumps = 5;
  double amplitude_min = 0.2, amplitude_max = 1.0;
  double width_min = 0.02, width_max = 0.06;
  double center_min = -0.25, center_max = 0.25;
  double speed_max = 1.0;  ///< bumps move with velocity in [-speed_max, speed_max]
  double omega_max = 20.0;  ///< temporal phase rate
  LightConeGrid grid;
};

struct MovingBump {
  double amplitude, width, center, phase, speed, omega;
};

namespace detail {

inline std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

inline std::vector<MovingBump> draw_bumps(const RandomFieldSpec& s, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, std::max(1, s.max_bumps));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  std::vector<MovingBump> bumps(static_cast<std::size_t>(count(rng)));
  for (auto& b : bumps) {
    b.amplitude = in(s.amplitude_min, s.amplitude_max);
    b.width = in(s.width_min, s.width_max);
    b.center = in(s.center_min, s.center_max);
    b.phase = in(0.0, 2.0 * std::numbers::pi);
    b.speed = in(-s.speed_max, s.speed_max);
    b.omega = in(-s.omega_max, s.omega_max);
  }
  return bumps;
}

/// Adds A exp(-z^2/2) e^{i phase}, z = (x - c)/width, to a layer using the
/// ratio recurrence e_{i+1} = e_i r_i, r_{i+1} = r_i exp(-h^2); nodes with
/// |z| > 9 are skipped.
inline void add_gaussian_row(std::span<Complex> row, const LightConeGrid& g, double c, double width,
                             Complex coeff) {
  constexpr double cut = 9.0;
  const double h = g.dx / width;
  const long lo = std::max(0L, static_cast<long>(std::ceil((c - cut * width - g.x_min) / g.dx)));
  const long hi = std::min(static_cast<long>(g.n_x) - 1,
                           static_cast<long>(std::floor((c + cut * width - g.x_min) / g.dx)));
  if (lo > hi) return;
  double z = (g.x(lo) - c) / width;
  double e = std::exp(-0.5 * z * z);
  double r = std::exp(-z * h - 0.5 * h * h);
  const double q = std::exp(-h * h);
  for (long i = lo; i <= hi; ++i) {
    row[static_cast<std::size_t>(i)] += coeff * e;
    e *= r;
    r *= q;
  }
}

inline ComplexField moving_field(const LightConeGrid& g, const std::vector<MovingBump>& bumps) {
  ComplexField out(g);
  for (int n = 0; n <= g.n_t; ++n) {
    auto row = out.layer(n);
    const double t = g.t(n);
    for (const auto& b : bumps) {
      add_gaussian_row(row, g, b.center + b.speed * t, b.width,
                       std::polar(b.amplitude, b.phase + b.omega * t));
    }
  }
  return out;
}

inline ComplexFunction static_function(const LightConeGrid& g, const std::vector<MovingBump>& bumps) {
  ComplexFunction out(g);
  for (const auto& b : bumps) {
    add_gaussian_row(out.values(), g, b.center, b.width, std::polar(b.amplitude, b.phase));
  }
  return out;
}

}  // namespace detail

/// Seeded draw of the four space-time fields used by one trial.
struct RandomTrial {
  ComplexField u, up, v, vp;
  ComplexFunction f;
  RealFunction a0, a1, E0;
  double a = 0.0;
  double R = 0.0;
};

inline RandomTrial draw_trial(const RandomFieldSpec& s, std::uint64_t trial) {
  const auto& g = s.grid;
  RandomTrial t;
  auto field = [&](std::uint64_t stream) {
    auto rng = detail::trial_engine(s.seed, trial, stream);
    return detail::moving_field(g, detail::draw_bumps(s, rng));
  };
  t.u = field(0);
  t.up = field(1);
  t.v = field(2);
  t.vp = field(3);
  auto rng = detail::trial_engine(s.seed, trial, 4);
  t.f = detail::static_function(g, detail::draw_bumps(s, rng));
  auto real = [&](std::mt19937_64& r) {
    auto c = detail::static_function(g, detail::draw_bumps(s, r));
    return real_part(c);
  };
  t.a0 = real(rng);
  t.a1 = real(rng);
  t.E0 = real(rng);
  std::uniform_int_distribution<long> node(g.node_nearest(-0.5), g.node_nearest(0.5));
  t.a = g.x(node(rng));
  const long max_pairs = std::max(1L, static_cast<long>(std::floor(1.0 / (2.0 * g.dx))));
  std::uniform_int_distribution<long> pairs(1, max_pairs);
  t.R = 2.0 * g.dx * static_cast<double>(pairs(rng));
  return t;
}

inline std::vector<CheckReport> run_trial(const RandomFieldSpec& s, std::uint64_t trial) {
  const auto t = draw_trial(s, trial);
  auto out = check_null_estimates(t.u, t.up, t.v, t.vp);
  auto data = check_data_inequalities(t.f, s.grid.T, t.a, t.R);
  auto free = check_free_potential_bound(t.a0, t.a1, t.E0, s.grid);
  out.insert(out.end(), data.begin(), data.end());
  out.insert(out.end(), free.begin(), free.end());
  const std::string ctx = "seed=" + std::to_string(s.seed) + " trial=" + std::to_string(trial);
  for (auto& r : out) r.context = r.context.empty() ? ctx : ctx + " " + r.context;
  return out;
}

struct SuiteEntry {
  CheckReport worst;      ///< smallest relative margin seen
  double max_ratio = 0.0;  ///< largest lhs / rhs (sharpness probe)
  int violations = 0;
};

struct SuiteSummary {
  int trials = 0;
  int violations = 0;
  std::vector<SuiteEntry> entries;  ///< in first-seen order
  CheckReport summary;
};

inline double relative_margin(const CheckReport& r) {
  const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-300});
  return r.margin / scale;
}

/// Runs `n_trials` seeded trials (optionally on several threads) and keeps
/// the worst relative margin per check. The reduction visits trials in
/// order, so the summary does not depend on the thread count.
inline SuiteSummary random_suite(const RandomFieldSpec& spec, int n_trials, int threads = 1) {
  if (n_trials < 1) throw Error(ErrorKind::InvalidArgument, "random_suite needs n_trials >= 1");
  std::vector<std::vector<CheckReport>> results(static_cast<std::size_t>(n_trials));
  const int workers = std::clamp(threads, 1, n_trials);
  if (workers == 1) {
    for (int k = 0; k < n_trials; ++k) results[static_cast<std::size_t>(k)] = run_trial(spec, static_cast<std::uint64_t>(k));
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int k = w; k < n_trials; k += workers) {
            results[static_cast<std::size_t>(k)] = run_trial(spec, static_cast<std::uint64_t>(k));
          }
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  SuiteSummary s;
  s.trials = n_trials;
  for (const auto& trial : results) {
    for (const auto& r : trial) {
      auto it = std::find_if(s.entries.begin(), s.entries.end(),
                             [&](const SuiteEntry& e) { return e.worst.name == r.name; });
      if (it == s.entries.end()) {
        s.entries.push_back({r, 0.0, 0});
        it = s.entries.end() - 1;
      } else if (relative_margin(r) < relative_margin(it->worst)) {
        it->worst = r;
      }
      if (r.rhs > 0.0) it->max_ratio = std::max(it->max_ratio, r.lhs / r.rhs);
      if (!r.pass) {
        ++it->violations;
        ++s.violations;
      }
    }
  }
  s.summary = check_le("random_suite_violations", static_cast<double>(s.violations), 0.0, 0.0, 0.0,
                       "seed=" + std::to_string(spec.seed) + " trials=" + std::to_string(n_trials));
  return s;
}

}  // namespace mdtgn
