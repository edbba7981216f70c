#pragma once
// Space-time norms on the light-cone lattice.
//
//   D(T):   sup_x ( int_0^T |f(x+2s)|^2 ds )^{1/2}
//   X+(T):  sup_x ( int_0^T |u(x-t,t)|^2 dt )^{1/2}      (u across its own family)
//   X-(T):  sup_x ( int_0^T |v(x+t,t)|^2 dt )^{1/2}
//   Env+:   inf ||p||_D over profiles with |u(x,t)| <= p(x-t)
//   Env-:   inf ||q||_D over profiles with |v(x,t)| <= q(x+t)
//   N+(T):  || int_0^T |G(.+s,s)| ds ||_D ,  N-(T): || int_0^T |F(.-s,s)| ds ||_D
//   Y+/-:   sup_t ||w(.,t)||_D + X +/- + Env +/-
//
// All time integrals are composite trapezoids on the grid layers. Fields are
// zero outside the grid, and every supremum runs over all lattice positions
// whose ray meets the grid, so translation invariance holds exactly.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdtgn/lattice.hpp"

namespace mdtgn {

/// + pairs with u (moves along x - t = const), - pairs with v.
enum class Family { plus, minus };
enum class Component { u, v };

inline Family family_of(Component c) { return c == Component::u ? Family::plus : Family::minus; }

struct NormReport {
  std::string name;
  double value = 0.0;
  std::optional<RealFunction> auxiliary;
};

namespace detail {

/// Sup over starts s in [-2k, n-1] of the trapezoid sum
/// dt * sum_j w_j sq[s + 2j], j = 0..k, with sq zero outside [0, n).
inline double d_norm_squared_of_samples(std::span<const double> sq, int k, double dt) {
  const long n = static_cast<long>(sq.size());
  if (k <= 0 || n == 0) return 0.0;
  // prefix[m] = sum of sq[m], sq[m-2], ... (same parity, m >= 0)
  std::vector<double> prefix(static_cast<std::size_t>(n));
  for (long m = 0; m < n; ++m) {
    prefix[static_cast<std::size_t>(m)] =
        sq[static_cast<std::size_t>(m)] + (m >= 2 ? prefix[static_cast<std::size_t>(m - 2)] : 0.0);
  }
  auto pre = [&](long m) -> double {
    if (m < 0) return 0.0;
    if (m >= n) m -= ((m - (n - 1)) + 1) / 2 * 2;  // last index < n with the same parity
    return m < 0 ? 0.0 : prefix[static_cast<std::size_t>(m)];
  };
  auto at = [&](long m) -> double {
    return (m < 0 || m >= n) ? 0.0 : sq[static_cast<std::size_t>(m)];
  };
  const long span = 2L * k;
  double best = 0.0;
  for (long s = -span; s < n; ++s) {
    const double total = pre(s + span) - pre(s - 2);
    const double ray = dt * (total - 0.5 * at(s) - 0.5 * at(s + span));
    best = std::max(best, ray);
  }
  return best;
}

/// Lines of constant (node - layer) are indexed by c + n_t, c in [-n_t, n_x-1];
/// lines of constant (node + layer) by c, c in [0, n_x-1+n_t].
enum class Line { diff, sum };

inline int line_count(const LightConeGrid& g) { return g.n_x + g.n_t; }

inline int line_index(const LightConeGrid& g, Line kind, int i, int n) {
  return kind == Line::diff ? i - n + g.n_t : i + n;
}

/// Trapezoid in time of value(i, n) along every line of the given kind.
template <class Field, class Fn>
std::vector<double> line_trapezoid(const Field& w, Line kind, Fn value) {
  const auto& g = w.grid();
  std::vector<double> out(static_cast<std::size_t>(line_count(g)), 0.0);
  for (int n = 0; n <= g.n_t; ++n) {
    const double wt = trapezoid_weight(n, g.n_t, g.dt);
    for (int i = 0; i < g.n_x; ++i) {
      out[static_cast<std::size_t>(line_index(g, kind, i, n))] += wt * value(w(i, n));
    }
  }
  return out;
}

template <class Field>
std::vector<double> line_max_abs(const Field& w, Line kind) {
  const auto& g = w.grid();
  std::vector<double> out(static_cast<std::size_t>(line_count(g)), 0.0);
  for (int n = 0; n <= g.n_t; ++n) {
    for (int i = 0; i < g.n_x; ++i) {
      auto& slot = out[static_cast<std::size_t>(line_index(g, kind, i, n))];
      slot = std::max(slot, std::abs(w(i, n)));
    }
  }
  return out;
}

inline std::vector<double> squares(std::span<const double> a) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * a[i];
  return out;
}

/// X norms integrate across the component's own family.
inline Line crossing_line(Family fam) { return fam == Family::plus ? Line::sum : Line::diff; }
/// Envelopes and N norms follow the component's own family.
inline Line own_line(Family fam) { return fam == Family::plus ? Line::diff : Line::sum; }

}  // namespace detail

template <class T>
double d_norm(const GridFunction<T>& f, double T_span) {
  const int k = f.grid().steps(T_span, "D(T) horizon");
  std::vector<double> sq(static_cast<std::size_t>(f.size()));
  for (int i = 0; i < f.size(); ++i) sq[static_cast<std::size_t>(i)] = modulus_squared(f[i]);
  return std::sqrt(detail::d_norm_squared_of_samples(sq, k, f.grid().dt));
}

/// D(T) norm of one layer of a space-time field, horizon = the slab length.
template <class T>
double layer_d_norm(const SpaceTimeField<T>& w, int n, int k) {
  auto l = w.layer(n);
  std::vector<double> sq(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) sq[i] = modulus_squared(l[i]);
  return std::sqrt(detail::d_norm_squared_of_samples(sq, k, w.grid().dt));
}

/// ||w(., t_n)||_{D(T)} for every layer n, T = slab length.
template <class T>
std::vector<double> layer_d_norms(const SpaceTimeField<T>& w) {
  std::vector<double> out(static_cast<std::size_t>(w.n_t() + 1));
  for (int n = 0; n <= w.n_t(); ++n) out[static_cast<std::size_t>(n)] = layer_d_norm(w, n, w.n_t());
  return out;
}

template <class T>
double sup_layer_d_norm(const SpaceTimeField<T>& w) {
  const auto norms = layer_d_norms(w);
  return *std::max_element(norms.begin(), norms.end());
}

template <class T>
double x_norm(const SpaceTimeField<T>& w, Family fam) {
  const auto line = detail::line_trapezoid(w, detail::crossing_line(fam),
                                           [](const T& z) { return modulus_squared(z); });
  return std::sqrt(std::max(0.0, *std::max_element(line.begin(), line.end())));
}

inline double x_norm(const SpinorHistory& h, Component c) {
  return c == Component::u ? x_norm(h.u, Family::plus) : x_norm(h.v, Family::minus);
}

/// Minimal dominating profile on the extended lattice: for +, p(y) =
/// max_t |u(y+t, t)|, indexed y + n_t; for -, q(y) = max_t |v(y-t, t)|, indexed y.
template <class T>
std::vector<double> envelope_profile(const SpaceTimeField<T>& w, Family fam) {
  return detail::line_max_abs(w, detail::own_line(fam));
}

template <class T>
double envelope_value(const SpaceTimeField<T>& w, Family fam) {
  const auto sq = detail::squares(envelope_profile(w, fam));
  return std::sqrt(detail::d_norm_squared_of_samples(sq, w.n_t(), w.grid().dt));
}

template <class T>
NormReport envelope_norm(const SpaceTimeField<T>& w, Family fam) {
  const auto& g = w.grid();
  const auto profile = envelope_profile(w, fam);
  const auto sq = detail::squares(profile);
  NormReport r;
  r.name = fam == Family::plus ? "envelope+" : "envelope-";
  r.value = std::sqrt(detail::d_norm_squared_of_samples(sq, g.n_t, g.dt));
  RealFunction aux(g);
  const int offset = fam == Family::plus ? g.n_t : 0;
  for (int i = 0; i < g.n_x; ++i) aux[i] = profile[static_cast<std::size_t>(i + offset)];
  r.auxiliary = std::move(aux);
  return r;
}

inline NormReport envelope_norm(const SpinorHistory& h, Component c) {
  return c == Component::u ? envelope_norm(h.u, Family::plus) : envelope_norm(h.v, Family::minus);
}

/// N+ uses int_0^T |F(y+s, s)| ds, N- uses int_0^T |F(y-s, s)| ds.
template <class T>
double n_norm(const SpaceTimeField<T>& F, Family sign) {
  const auto profile = detail::line_trapezoid(F, detail::own_line(sign),
                                              [](const T& z) { return std::abs(z); });
  const auto sq = detail::squares(profile);
  return std::sqrt(detail::d_norm_squared_of_samples(sq, F.n_t(), F.grid().dt));
}

template <class T>
double y_norm(const SpaceTimeField<T>& w, Family fam) {
  return sup_layer_d_norm(w) + x_norm(w, fam) + envelope_value(w, fam);
}

inline double y_norm(const SpinorHistory& h, Component c) {
  return y_norm(c == Component::u ? h.u : h.v, family_of(c));
}

}  // namespace mdtgn
