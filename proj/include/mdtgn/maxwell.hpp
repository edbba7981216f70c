#pragma once
// Electromagnetic potentials from charge densities via the closed
// D'Alembert formulas:
//
//   A0 + A1 = A+free - W(|v|^2),     A0 - A1 = A-free - W(|u|^2),
//   A+free(x,t) = a0(x+t) + a1(x+t) - 1/2 int_{x-t}^{x+t} E0,
//   A-free(x,t) = a0(x-t) - a1(x-t) + 1/2 int_{x-t}^{x+t} E0,
//   W F(x,t)    = int_0^t int_{x-(t-s)}^{x+t-s} F(y,s) dy ds.
//
// Sources built from the spinor are zero outside the grid; the real data
// a0, a1, E0 continue as constants beyond the grid edges.

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "mdtgn/lattice.hpp"

namespace mdtgn {

namespace detail {

/// Trapezoid integrals of a layer over node ranges [a, b], for indices on
/// an extended lattice [-pad, n_x - 1 + pad].
class RangeIntegrator {
 public:
  enum class Extension { zero, edge };

  RangeIntegrator(std::span<const double> values, double dx, int pad, Extension ext)
      : dx_(dx), pad_(pad), ext_values_(values.size() + 2 * static_cast<std::size_t>(pad)),
        prefix_(ext_values_.size() + 1, 0.0) {
    const long n = static_cast<long>(values.size());
    for (long e = 0; e < static_cast<long>(ext_values_.size()); ++e) {
      const long i = e - pad;
      double v = 0.0;
      if (i >= 0 && i < n) {
        v = values[static_cast<std::size_t>(i)];
      } else if (ext == Extension::edge && n > 0) {
        v = values[static_cast<std::size_t>(std::clamp(i, 0L, n - 1))];
      }
      ext_values_[static_cast<std::size_t>(e)] = v;
    }
    for (std::size_t e = 0; e < ext_values_.size(); ++e) prefix_[e + 1] = prefix_[e] + ext_values_[e];
  }

  double value(long i) const { return ext_values_[static_cast<std::size_t>(i + pad_)]; }

  /// Trapezoid over nodes a..b (a <= b); zero when a == b.
  double integral(long a, long b) const {
    if (b <= a) return 0.0;
    const auto ea = static_cast<std::size_t>(a + pad_);
    const auto eb = static_cast<std::size_t>(b + pad_);
    const double total = prefix_[eb + 1] - prefix_[ea];
    return dx_ * (total - 0.5 * ext_values_[ea] - 0.5 * ext_values_[eb]);
  }

 private:
  double dx_;
  long pad_;
  std::vector<double> ext_values_;
  std::vector<double> prefix_;
};

/// Trapezoid along the characteristic through (i, n) from layer 0 up to n:
///   Line::sum  ->  samples value(i + n - k, k)   (x + t = const)
///   Line::diff ->  samples value(i - n + k, k)   (x - t = const)
/// value(node, layer) is taken as zero for nodes outside the grid.
template <class Fn>
RealField partial_line_integrals(const LightConeGrid& g, bool sum_line, Fn value) {
  RealField out(g);
  std::vector<double> running(static_cast<std::size_t>(g.n_x + g.n_t), 0.0);
  std::vector<double> first(running.size(), 0.0);
  for (int n = 0; n <= g.n_t; ++n) {
    for (int i = 0; i < g.n_x; ++i) {
      const int c = sum_line ? i + n : i - n + g.n_t;
      const double val = value(i, n);
      auto& run = running[static_cast<std::size_t>(c)];
      run += val;
      if (n == 0) first[static_cast<std::size_t>(c)] = val;
      // the line started at layer 0 on node (sum: i + n, diff: i - n); if that
      // node is off-grid its sample is zero, and `first` stays 0.
      out(i, n) = g.dt * (run - 0.5 * first[static_cast<std::size_t>(c)] - 0.5 * val);
    }
  }
  return out;
}

}  // namespace detail

/// Incremental evaluation of W layer by layer. After the source at layers
/// 0..n has been pushed, `current()` holds W at layer n+1 (W only needs
/// sources strictly below the evaluation layer).
///
/// Uses the cone recursion V(i,n+1) = V(i-1,n) + V(i+1,n) - V(i,n-1) + S_n(i-1,i+1),
/// V(i,n) = sum_{k<n} S_k(i-(n-k), i+(n-k)), which reproduces the double
/// trapezoid rule exactly; W(i,n) = dt V(i,n) - dt/2 S_0(i-n, i+n).
class ConeIntegral {
 public:
  explicit ConeIntegral(const LightConeGrid& g)
      : g_(g), pad_(g.n_t + 2), ext_(static_cast<std::size_t>(g.n_x + 2 * pad_)),
        v_prev_(ext_, 0.0), v_cur_(ext_, 0.0), v_next_(ext_, 0.0), src_(ext_, 0.0),
        w_(static_cast<std::size_t>(g.n_x), 0.0) {}

  int layer() const { return layer_; }
  std::span<const double> current() const { return w_; }

  void push(std::span<const double> source) {
    if (static_cast<int>(source.size()) != g_.n_x) {
      throw Error(ErrorKind::GridMismatch, "cone source layer has wrong length");
    }
    std::fill(src_.begin(), src_.end(), 0.0);
    std::copy(source.begin(), source.end(), src_.begin() + pad_);
    if (layer_ == 0) {
      base_ = std::make_unique<detail::RangeIntegrator>(source, g_.dx, pad_,
                                                        detail::RangeIntegrator::Extension::zero);
    }
    const double dx = g_.dx;
    for (std::size_t e = 1; e + 1 < ext_; ++e) {
      v_next_[e] = v_cur_[e - 1] + v_cur_[e + 1] - v_prev_[e] +
                   dx * (0.5 * src_[e - 1] + src_[e] + 0.5 * src_[e + 1]);
    }
    v_next_.front() = 0.0;
    v_next_.back() = 0.0;
    std::swap(v_prev_, v_cur_);
    std::swap(v_cur_, v_next_);
    ++layer_;
    const long n = layer_;
    for (int i = 0; i < g_.n_x; ++i) {
      w_[static_cast<std::size_t>(i)] =
          g_.dt * v_cur_[static_cast<std::size_t>(i + pad_)] - 0.5 * g_.dt * base_->integral(i - n, i + n);
    }
  }

 private:
  LightConeGrid g_;
  int pad_;
  std::size_t ext_;
  std::vector<double> v_prev_, v_cur_, v_next_, src_;
  std::vector<double> w_;
  std::unique_ptr<detail::RangeIntegrator> base_;
  int layer_ = 0;
};

inline RealField w_apply(const RealField& F) {
  const auto& g = F.grid();
  RealField out(g);
  ConeIntegral cone(g);
  for (int n = 0; n < g.n_t; ++n) {
    cone.push(F.layer(n));
    out.set_layer(n + 1, cone.current());
  }
  return out;
}

/// Free potentials A+free (sign = +1) or A-free (sign = -1).
inline RealField a_free(const RealFunction& a0, const RealFunction& a1, const RealFunction& E0,
                        const LightConeGrid& grid, int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidArgument, "sign must be +1 or -1");
  if (a0.grid().n_x != grid.n_x || a1.grid().n_x != grid.n_x || E0.grid().n_x != grid.n_x) {
    throw Error(ErrorKind::GridMismatch, "field data not on the solution grid");
  }
  using Ext = detail::RangeIntegrator::Extension;
  const detail::RangeIntegrator e0(E0.values(), grid.dx, grid.n_t + 1, Ext::edge);
  RealField out(grid);
  for (int n = 0; n <= grid.n_t; ++n) {
    for (int i = 0; i < grid.n_x; ++i) {
      const double half_flux = 0.5 * e0.integral(i - n, i + n);
      if (sign == 1) {
        out(i, n) = a0.edge_extended(i + n) + a1.edge_extended(i + n) - half_flux;
      } else {
        out(i, n) = a0.edge_extended(i - n) - a1.edge_extended(i - n) + half_flux;
      }
    }
  }
  return out;
}

inline RealField density_u(const SpinorHistory& h) {
  RealField out(h.grid());
  auto dst = out.values();
  auto src = h.u.values();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = std::norm(src[k]);
  return out;
}

inline RealField density_v(const SpinorHistory& h) {
  RealField out(h.grid());
  auto dst = out.values();
  auto src = h.v.values();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = std::norm(src[k]);
  return out;
}

/// -int_0^t |u(x+t-s,s)|^2 ds + int_0^t |v(x-t+s,s)|^2 ds + (E0(x+t) + E0(x-t))/2
inline RealField electric_field(const SpinorHistory& h, const RealFunction& E0) {
  const auto& g = h.grid();
  const auto iu = detail::partial_line_integrals(
      g, true, [&](int i, int n) { return std::norm(h.u(i, n)); });
  const auto iv = detail::partial_line_integrals(
      g, false, [&](int i, int n) { return std::norm(h.v(i, n)); });
  RealField E(g);
  for (int n = 0; n <= g.n_t; ++n) {
    for (int i = 0; i < g.n_x; ++i) {
      E(i, n) = -iu(i, n) + iv(i, n) + 0.5 * (E0.edge_extended(i + n) + E0.edge_extended(i - n));
    }
  }
  return E;
}

struct PotentialAssembly {
  EmHistory em;
  RealField A_plus;
  RealField A_minus;
  /// max |(A0, A1) via the two D'Alembert displays - (A0, A1) via A+/A-|,
  /// relative to max(1, sup |A|).
  double route_discrepancy = 0.0;
};

inline PotentialAssembly assemble_potentials(const SpinorHistory& h, const RealFunction& a0,
                                             const RealFunction& a1, const RealFunction& E0) {
  const auto& g = h.grid();
  const auto rho_u = density_u(h);
  const auto rho_v = density_v(h);
  const auto wu = w_apply(rho_u);
  const auto wv = w_apply(rho_v);

  PotentialAssembly out;
  out.A_plus = a_free(a0, a1, E0, g, 1);
  out.A_minus = a_free(a0, a1, E0, g, -1);
  {
    auto ap = out.A_plus.values();
    auto am = out.A_minus.values();
    auto su = wu.values();
    auto sv = wv.values();
    for (std::size_t k = 0; k < ap.size(); ++k) {
      ap[k] -= sv[k];
      am[k] -= su[k];
    }
  }
  out.em.A0 = RealField(g);
  out.em.A1 = RealField(g);
  {
    auto ap = out.A_plus.values();
    auto am = out.A_minus.values();
    auto A0 = out.em.A0.values();
    auto A1 = out.em.A1.values();
    for (std::size_t k = 0; k < ap.size(); ++k) {
      A0[k] = 0.5 * (ap[k] + am[k]);
      A1[k] = 0.5 * (ap[k] - am[k]);
    }
  }
  out.em.E = electric_field(h, E0);
  out.em.a0 = a0;
  out.em.a1 = a1;
  out.em.E0 = E0;

  // Second route: the separate D'Alembert displays for A0 and A1.
  RealField rho(g), cur(g);
  {
    auto r = rho.values();
    auto j = cur.values();
    auto su = rho_u.values();
    auto sv = rho_v.values();
    for (std::size_t k = 0; k < r.size(); ++k) {
      r[k] = su[k] + sv[k];
      j[k] = su[k] - sv[k];
    }
  }
  const auto w_rho = w_apply(rho);
  const auto w_cur = w_apply(cur);
  using Ext = detail::RangeIntegrator::Extension;
  const detail::RangeIntegrator e0(E0.values(), g.dx, g.n_t + 1, Ext::edge);
  double diff = 0.0;
  double scale = 1.0;
  for (int n = 0; n <= g.n_t; ++n) {
    for (int i = 0; i < g.n_x; ++i) {
      const double ap = a0.edge_extended(i + n), am = a0.edge_extended(i - n);
      const double bp = a1.edge_extended(i + n), bm = a1.edge_extended(i - n);
      const double A0 = 0.5 * (ap + am) + 0.5 * (bp - bm) - 0.5 * w_rho(i, n);
      const double A1 =
          0.5 * (ap - am) + 0.5 * (bp + bm) - 0.5 * e0.integral(i - n, i + n) + 0.5 * w_cur(i, n);
      diff = std::max({diff, std::abs(A0 - out.em.A0(i, n)), std::abs(A1 - out.em.A1(i, n))});
      scale = std::max({scale, std::abs(A0), std::abs(A1)});
    }
  }
  out.route_discrepancy = diff / scale;
  return out;
}

struct Residual {
  RealField field;
  double sup = 0.0;
};

/// Closed-form d_t A0 - d_x A1:
///   -int_0^t |u(x+t-s,s)|^2 ds - int_0^t |v(x-t+s,s)|^2 ds + (E0(x+t) - E0(x-t))/2
inline Residual lorenz_residual(const SpinorHistory& h, const RealFunction& E0) {
  const auto& g = h.grid();
  const auto iu = detail::partial_line_integrals(
      g, true, [&](int i, int n) { return std::norm(h.u(i, n)); });
  const auto iv = detail::partial_line_integrals(
      g, false, [&](int i, int n) { return std::norm(h.v(i, n)); });
  Residual r{RealField(g), 0.0};
  for (int n = 0; n <= g.n_t; ++n) {
    for (int i = 0; i < g.n_x; ++i) {
      const double val =
          -iu(i, n) - iv(i, n) + 0.5 * (E0.edge_extended(i + n) - E0.edge_extended(i - n));
      r.field(i, n) = val;
      r.sup = std::max(r.sup, std::abs(val));
    }
  }
  return r;
}

inline Residual lorenz_residual(const PotentialAssembly& assembly, const SpinorHistory& h,
                                const RealFunction& E0) {
  require_same_grid(assembly.em.grid(), h.grid(), "assembly and spinor on different grids");
  return lorenz_residual(h, E0);
}

/// Centered differences of d_t A0 - d_x A1 on interior nodes and layers;
/// entries on the boundary rows/columns are left at zero.
inline Residual lorenz_residual_fd(const EmHistory& em) {
  const auto& g = em.grid();
  Residual r{RealField(g), 0.0};
  const double inv = 1.0 / (2.0 * g.dx);
  for (int n = 1; n < g.n_t; ++n) {
    for (int i = 1; i + 1 < g.n_x; ++i) {
      const double val = (em.A0(i, n + 1) - em.A0(i, n - 1)) * inv -
                         (em.A1(i + 1, n) - em.A1(i - 1, n)) * inv;
      r.field(i, n) = val;
      r.sup = std::max(r.sup, std::abs(val));
    }
  }
  return r;
}

/// E0 = kappa + int_0^x (|f|^2 + |g|^2), cumulative trapezoid anchored at the
/// node nearest x = 0.
inline RealFunction gauss_e0(const ComplexFunction& f, const ComplexFunction& g, double kappa) {
  require_same_grid(f.grid(), g.grid(), "gauss_e0 data on different grids");
  const auto& grid = f.grid();
  std::vector<double> rho(static_cast<std::size_t>(grid.n_x));
  for (int i = 0; i < grid.n_x; ++i) rho[static_cast<std::size_t>(i)] = std::norm(f[i]) + std::norm(g[i]);
  RealFunction E0(grid);
  const int anchor = grid.node_nearest(0.0);
  E0[anchor] = kappa;
  for (int i = anchor + 1; i < grid.n_x; ++i) {
    E0[i] = E0[i - 1] + 0.5 * grid.dx * (rho[static_cast<std::size_t>(i - 1)] + rho[static_cast<std::size_t>(i)]);
  }
  for (int i = anchor - 1; i >= 0; --i) {
    E0[i] = E0[i + 1] - 0.5 * grid.dx * (rho[static_cast<std::size_t>(i)] + rho[static_cast<std::size_t>(i + 1)]);
  }
  return E0;
}

}  // namespace mdtgn
