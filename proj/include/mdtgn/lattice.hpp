#pragma once
// Light-cone lattice: a uniform space-time grid with dt == dx, so that both
// characteristic families x - t = const and x + t = const pass through nodes.
// Transport along characteristics is then an exact index shift.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "mdtgn/error.hpp"

namespace mdtgn {

using Complex = std::complex<double>;

inline constexpr double kCommensurateTol = 1e-9;

struct LightConeGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  double dx = 0.0;
  double dt = 0.0;
  int n_x = 0;
  int n_t = 0;
  double T = 0.0;

  double x(long i) const { return x_min + static_cast<double>(i) * dx; }
  double t(long n) const { return static_cast<double>(n) * dt; }
  std::size_t layer_size() const { return static_cast<std::size_t>(n_x); }
  std::size_t node_count() const { return static_cast<std::size_t>(n_x) * (n_t + 1); }

  /// Number of steps spanning a duration; throws unless it is a whole number of steps.
  int steps(double duration, const char* what = "duration") const {
    const double ratio = duration / dt;
    const double k = std::round(ratio);
    if (std::abs(ratio - k) > kCommensurateTol || k < 0) {
      throw Error(ErrorKind::NonCommensurate,
                  std::string(what) + " " + std::to_string(duration) +
                      " is not an integer multiple of dt=" + std::to_string(dt));
    }
    return static_cast<int>(k);
  }

  /// Index of the node at coordinate x; throws unless x lies on a node.
  int node_at(double xv) const {
    const double ratio = (xv - x_min) / dx;
    const double k = std::round(ratio);
    if (std::abs(ratio - k) > kCommensurateTol) {
      throw Error(ErrorKind::NonCommensurate,
                  "x=" + std::to_string(xv) + " is not a grid node");
    }
    return static_cast<int>(k);
  }

  int node_nearest(double xv) const {
    const long k = std::lround((xv - x_min) / dx);
    return static_cast<int>(std::clamp<long>(k, 0, n_x - 1));
  }

  bool operator==(const LightConeGrid&) const = default;
};

inline LightConeGrid build_grid(double x_min, double x_max, double dx, double T) {
  if (!(x_max > x_min) || !(dx > 0.0) || !(T > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "grid requires x_max > x_min, dx > 0, T > 0");
  }
  const double cells = (x_max - x_min) / dx;
  const double layers = T / dx;
  if (std::abs(cells - std::round(cells)) > kCommensurateTol) {
    throw Error(ErrorKind::NonCommensurate, "interval length is not a multiple of dx");
  }
  if (std::abs(layers - std::round(layers)) > kCommensurateTol) {
    throw Error(ErrorKind::NonCommensurate, "T is not a multiple of dx");
  }
  LightConeGrid g;
  g.x_min = x_min;
  g.dx = dx;
  g.dt = dx;
  g.n_x = static_cast<int>(std::round(cells)) + 1;
  g.n_t = static_cast<int>(std::round(layers));
  g.x_max = x_min + (g.n_x - 1) * dx;
  g.T = g.n_t * g.dt;
  if (g.n_x < 2 || g.n_t < 1) {
    throw Error(ErrorKind::InvalidArgument, "grid needs at least 2 nodes and 1 layer");
  }
  return g;
}

/// Same spatial lattice, different number of layers.
inline LightConeGrid with_layers(const LightConeGrid& g, int n_t) {
  LightConeGrid out = g;
  out.n_t = n_t;
  out.T = n_t * g.dt;
  return out;
}

inline void require_same_grid(const LightConeGrid& a, const LightConeGrid& b, const char* what) {
  if (!(a == b)) throw Error(ErrorKind::GridMismatch, what);
}

inline double modulus_squared(double v) { return v * v; }
inline double modulus_squared(const Complex& v) { return std::norm(v); }

// ---------------------------------------------------------------------------
// Grid functions (one time layer) and space-time fields (all layers).

template <class T>
class GridFunction {
 public:
  using value_type = T;

  GridFunction() = default;
  explicit GridFunction(const LightConeGrid& grid, T fill = T{})
      : grid_(grid), values_(grid.layer_size(), fill) {}
  GridFunction(const LightConeGrid& grid, std::vector<T> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.layer_size()) {
      throw Error(ErrorKind::GridMismatch, "grid function length differs from n_x");
    }
  }

  const LightConeGrid& grid() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  T& operator[](int i) { return values_[static_cast<std::size_t>(i)]; }
  const T& operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  /// Spinor convention: zero outside the grid.
  T zero_extended(long i) const {
    if (i < 0 || i >= static_cast<long>(values_.size())) return T{};
    return values_[static_cast<std::size_t>(i)];
  }
  /// Field convention: constant continuation of the edge values.
  T edge_extended(long i) const {
    const long last = static_cast<long>(values_.size()) - 1;
    return values_[static_cast<std::size_t>(std::clamp(i, 0L, last))];
  }

  double sup_abs() const {
    double s = 0.0;
    for (const auto& v : values_) s = std::max(s, std::abs(v));
    return s;
  }

  bool operator==(const GridFunction&) const = default;

 private:
  LightConeGrid grid_;
  std::vector<T> values_;
};

template <class T>
class SpaceTimeField {
 public:
  using value_type = T;

  SpaceTimeField() = default;
  explicit SpaceTimeField(const LightConeGrid& grid, T fill = T{})
      : grid_(grid), values_(grid.node_count(), fill) {}

  const LightConeGrid& grid() const { return grid_; }
  int n_x() const { return grid_.n_x; }
  int n_t() const { return grid_.n_t; }

  T& operator()(int i, int n) { return values_[index(i, n)]; }
  const T& operator()(int i, int n) const { return values_[index(i, n)]; }

  T zero_extended(long i, int n) const {
    if (i < 0 || i >= grid_.n_x) return T{};
    return values_[index(static_cast<int>(i), n)];
  }

  std::span<T> layer(int n) {
    return std::span<T>(values_).subspan(static_cast<std::size_t>(n) * grid_.n_x, grid_.layer_size());
  }
  std::span<const T> layer(int n) const {
    return std::span<const T>(values_).subspan(static_cast<std::size_t>(n) * grid_.n_x,
                                               grid_.layer_size());
  }
  GridFunction<T> layer_function(int n) const {
    auto l = layer(n);
    return GridFunction<T>(grid_, std::vector<T>(l.begin(), l.end()));
  }
  void set_layer(int n, std::span<const T> src) {
    std::copy(src.begin(), src.end(), layer(n).begin());
  }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  double sup_abs() const {
    double s = 0.0;
    for (const auto& v : values_) s = std::max(s, std::abs(v));
    return s;
  }

  bool operator==(const SpaceTimeField&) const = default;

 private:
  std::size_t index(int i, int n) const {
    return static_cast<std::size_t>(n) * grid_.n_x + static_cast<std::size_t>(i);
  }

  LightConeGrid grid_;
  std::vector<T> values_;
};

using ComplexFunction = GridFunction<Complex>;
using RealFunction = GridFunction<double>;
using ComplexField = SpaceTimeField<Complex>;
using RealField = SpaceTimeField<double>;

/// u moves along x - t = const, v along x + t = const.
struct SpinorHistory {
  ComplexField u;
  ComplexField v;

  SpinorHistory() = default;
  explicit SpinorHistory(const LightConeGrid& grid) : u(grid), v(grid) {}
  SpinorHistory(ComplexField u_, ComplexField v_) : u(std::move(u_)), v(std::move(v_)) {
    require_same_grid(u.grid(), v.grid(), "spinor components on different grids");
  }
  const LightConeGrid& grid() const { return u.grid(); }
};

struct EmHistory {
  RealField A0;
  RealField A1;
  RealField E;
  RealFunction a0;
  RealFunction a1;
  RealFunction E0;

  const LightConeGrid& grid() const { return A0.grid(); }
};

// ---------------------------------------------------------------------------
// Quadrature.

/// Composite trapezoid over equally spaced samples.
template <class Range>
double trapezoid(const Range& samples, double h) {
  const auto n = std::size(samples);
  if (n < 2) return 0.0;
  double s = 0.0;
  auto it = std::begin(samples);
  const double first = *it;
  double last = first;
  for (std::size_t k = 0; k < n; ++k, ++it) {
    last = *it;
    s += last;
  }
  return h * (s - 0.5 * first - 0.5 * last);
}

/// Trapezoidal weight of sample k in a rule with samples 0..n (n >= 0).
inline double trapezoid_weight(int k, int n, double h) {
  if (n == 0) return 0.0;
  return (k == 0 || k == n) ? 0.5 * h : h;
}

/// Trapezoid integral of |f|^2 over all grid nodes.
template <class T>
double l2_norm_squared(const GridFunction<T>& f) {
  std::vector<double> sq(static_cast<std::size_t>(f.size()));
  for (int i = 0; i < f.size(); ++i) sq[static_cast<std::size_t>(i)] = modulus_squared(f[i]);
  return trapezoid(sq, f.grid().dx);
}

template <class T>
double l2_norm(const GridFunction<T>& f) {
  return std::sqrt(l2_norm_squared(f));
}

// ---------------------------------------------------------------------------
// Sampling of initial data.

struct ZeroSpec {};
struct ConstantSpec {
  Complex value;
};
/// Closed interval [lo, hi]; nodes within 1e-9 dx of an endpoint count as inside.
struct IndicatorSpec {
  double lo = 0.0;
  double hi = 0.0;
  Complex value{1.0, 0.0};
};
/// amplitude * exp(-(x - center)^2 / (2 width^2)) * exp(i phase)
struct BumpSpec {
  double center = 0.0;
  double width = 1.0;
  double amplitude = 1.0;
  double phase = 0.0;
};
struct BumpSumSpec {
  std::vector<BumpSpec> bumps;
};
struct TabulatedSpec {
  std::vector<Complex> values;
};

using FunctionSpec =
    std::variant<ZeroSpec, ConstantSpec, IndicatorSpec, BumpSpec, BumpSumSpec, TabulatedSpec>;

inline Complex evaluate_bump(const BumpSpec& b, double x) {
  if (!(b.width > 0.0)) throw Error(ErrorKind::UnknownSpec, "bump width must be positive");
  const double z = (x - b.center) / b.width;
  return std::polar(b.amplitude * std::exp(-0.5 * z * z), b.phase);
}

inline ComplexFunction sample_function(const LightConeGrid& grid, const FunctionSpec& spec) {
  ComplexFunction out(grid);
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ZeroSpec>) {
        } else if constexpr (std::is_same_v<S, ConstantSpec>) {
          for (int i = 0; i < grid.n_x; ++i) out[i] = s.value;
        } else if constexpr (std::is_same_v<S, IndicatorSpec>) {
          const double eps = 1e-9 * grid.dx;
          for (int i = 0; i < grid.n_x; ++i) {
            const double x = grid.x(i);
            if (x >= s.lo - eps && x <= s.hi + eps) out[i] = s.value;
          }
        } else if constexpr (std::is_same_v<S, BumpSpec>) {
          for (int i = 0; i < grid.n_x; ++i) out[i] = evaluate_bump(s, grid.x(i));
        } else if constexpr (std::is_same_v<S, BumpSumSpec>) {
          for (int i = 0; i < grid.n_x; ++i) {
            Complex acc{};
            for (const auto& b : s.bumps) acc += evaluate_bump(b, grid.x(i));
            out[i] = acc;
          }
        } else if constexpr (std::is_same_v<S, TabulatedSpec>) {
          if (static_cast<int>(s.values.size()) != grid.n_x) {
            throw Error(ErrorKind::UnknownSpec, "tabulated values do not match n_x");
          }
          for (int i = 0; i < grid.n_x; ++i) out[i] = s.values[static_cast<std::size_t>(i)];
        }
      },
      spec);
  return out;
}

inline RealFunction real_part(const ComplexFunction& f) {
  RealFunction out(f.grid());
  for (int i = 0; i < f.size(); ++i) out[i] = f[i].real();
  return out;
}

inline ComplexFunction to_complex(const RealFunction& f) {
  ComplexFunction out(f.grid());
  for (int i = 0; i < f.size(); ++i) out[i] = f[i];
  return out;
}

/// Real-valued sampling for the electromagnetic data a0, a1, E0.
inline RealFunction sample_real(const LightConeGrid& grid, const FunctionSpec& spec) {
  return real_part(sample_function(grid, spec));
}

// ---------------------------------------------------------------------------
// Transport.

/// One-cell shift: +1 realises u(x, t+dt) = u(x-dt, t), -1 realises
/// v(x, t+dt) = v(x+dt, t). The vacated boundary cell receives zero.
template <class T>
GridFunction<T> transport_shift(const GridFunction<T>& field, int direction) {
  if (direction != 1 && direction != -1) {
    throw Error(ErrorKind::InvalidArgument, "transport direction must be +1 or -1");
  }
  GridFunction<T> out(field.grid());
  const int n = field.size();
  if (direction == 1) {
    for (int i = 1; i < n; ++i) out[i] = field[i - 1];
  } else {
    for (int i = 0; i + 1 < n; ++i) out[i] = field[i + 1];
  }
  return out;
}

/// In-place variant used by the time steppers.
template <class T>
void transport_shift_inplace(std::span<T> layer, int direction) {
  if (layer.empty()) return;
  if (direction == 1) {
    std::copy_backward(layer.begin(), layer.end() - 1, layer.end());
    layer.front() = T{};
  } else {
    std::copy(layer.begin() + 1, layer.end(), layer.begin());
    layer.back() = T{};
  }
}

// ---------------------------------------------------------------------------
// Compact-support policy.

inline constexpr double kSupportRelTol = 1e-14;

/// Data must vanish (to kSupportRelTol of its sup) outside
/// [x_min + 2T + pad, x_max - 2T - pad], so every backward cone used later
/// stays inside the grid.
template <class T>
void require_interior_support(const GridFunction<T>& f, double T_span, double pad,
                              const char* name) {
  const auto& g = f.grid();
  const double sup = f.sup_abs();
  if (sup == 0.0) return;
  const double threshold = kSupportRelTol * sup;
  const double lo = g.x_min + 2.0 * T_span + pad;
  const double hi = g.x_max - 2.0 * T_span - pad;
  const double eps = 1e-9 * g.dx;
  for (int i = 0; i < f.size(); ++i) {
    const double x = g.x(i);
    if ((x < lo - eps || x > hi + eps) && std::abs(f[i]) > threshold) {
      throw Error(ErrorKind::SupportViolation,
                  std::string(name) + " is not supported in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "] (nonzero at x=" + std::to_string(x) + ")");
    }
  }
}

}  // namespace mdtgn
