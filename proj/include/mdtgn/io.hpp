#pragma once
// Configuration parsing and artifact writers.
//
// A config is one JSON document:
//   {
//     "model":  {"kind": "mdtgn", "m": 0.2, "lambda1": 1, "lambda2": 1, "lambda3": 1}
//               or {"kind": "quadratic", "m": 0.1, "c1": [re, im], ...},
//     "grid":   {"x_min": -2, "x_max": 2, "dx": 0.0078125, "T": 0.125},
//     "data":   {"f": SPEC, "g": SPEC, "a0": SPEC, "a1": SPEC, "E0": SPEC, "kappa": 0},
//     "solver": {"scheme": "picard", "epsilon0": 0.05, "picard_tol": 1e-10,
//                "max_iter": 50, "pad": 0, "strict_smallness": false},
//     "estimates": {...}, "norms": {...}, "convergence": {...}, "gauge": {...}, "global": {...}
//   }
// SPEC is {"type": "zero" | "constant" | "indicator" | "bump" | "bump_sum" | "tabulated", ...}.
// Omitting data.E0 derives it from the Gauss law with constant kappa.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdtgn/error.hpp"
#include "mdtgn/estimates.hpp"
#include "mdtgn/lattice.hpp"
#include "mdtgn/report.hpp"
#include "mdtgn/studies.hpp"

namespace mdtgn {

using Json = nlohmann::json;

struct EstimatesOptions {
  int trials = 1000;
  int threads = 1;
  RandomFieldSpec field;  ///< grid filled from the run grid
};

struct NormsOptions {
  double T = 0.0;  ///< 0: use the grid's T
};

struct ConvergenceOptions {
  std::vector<double> dx = default_refinements();
  double min_order = 0.8;
};

struct GaugeOptions {
  FunctionSpec a0_target = ZeroSpec{};
  FunctionSpec a1_target = ZeroSpec{};
};

struct GlobalOptions {
  double tau = 5.0;
};

struct RunConfig {
  Scenario scenario;
  double dx = std::ldexp(1.0, -8);
  EstimatesOptions estimates;
  NormsOptions norms;
  ConvergenceOptions convergence;
  GaugeOptions gauge;
  GlobalOptions global;

  LightConeGrid grid() const { return build_grid(scenario.x_min, scenario.x_max, dx, scenario.T); }
};

namespace detail {

[[noreturn]] inline void config_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ConfigError, where + ": " + what);
}

inline void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) config_fail(where, "expected an object");
}

inline void reject_unknown(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  for (const auto& [k, _] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) config_fail(where, "unknown key '" + k + "'");
  }
}

inline double get_number(const Json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) config_fail(where + "." + key, "expected a number");
  return v.get<double>();
}

inline int get_int(const Json& j, const char* key, int fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) config_fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

inline bool get_bool(const Json& j, const char* key, bool fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_boolean()) config_fail(where + "." + key, "expected true or false");
  return v.get<bool>();
}

inline std::string get_string(const Json& j, const char* key, const std::string& fallback,
                              const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) config_fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

}  // namespace detail

/// A number, [re, im] or {"re": .., "im": ..}.
inline Complex parse_complex(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_object()) {
    return {detail::get_number(j, "re", 0.0, where), detail::get_number(j, "im", 0.0, where)};
  }
  detail::config_fail(where, "expected a number, [re, im] or {re, im}");
}

inline BumpSpec parse_bump(const Json& j, const std::string& where) {
  detail::require_object(j, where);
  BumpSpec b;
  b.center = detail::get_number(j, "center", 0.0, where);
  b.width = detail::get_number(j, "width", 1.0, where);
  b.amplitude = detail::get_number(j, "amplitude", 1.0, where);
  b.phase = detail::get_number(j, "phase", 0.0, where);
  if (!(b.width > 0.0)) detail::config_fail(where + ".width", "must be positive");
  return b;
}

inline FunctionSpec parse_function_spec(const Json& j, const std::string& where = "spec") {
  detail::require_object(j, where);
  if (!j.contains("type") || !j.at("type").is_string()) detail::config_fail(where, "missing string 'type'");
  const auto type = j.at("type").get<std::string>();
  if (type == "zero") return ZeroSpec{};
  if (type == "constant") {
    return ConstantSpec{j.contains("value") ? parse_complex(j.at("value"), where + ".value") : Complex{}};
  }
  if (type == "indicator") {
    IndicatorSpec s;
    s.lo = detail::get_number(j, "lo", 0.0, where);
    s.hi = detail::get_number(j, "hi", 0.0, where);
    if (j.contains("value")) s.value = parse_complex(j.at("value"), where + ".value");
    if (s.hi < s.lo) detail::config_fail(where, "indicator hi < lo");
    return s;
  }
  if (type == "bump") return parse_bump(j, where);
  if (type == "bump_sum") {
    if (!j.contains("bumps") || !j.at("bumps").is_array()) detail::config_fail(where, "bump_sum needs 'bumps'");
    BumpSumSpec s;
    for (std::size_t k = 0; k < j.at("bumps").size(); ++k) {
      s.bumps.push_back(parse_bump(j.at("bumps")[k], where + ".bumps[" + std::to_string(k) + "]"));
    }
    return s;
  }
  if (type == "tabulated") {
    if (!j.contains("values") || !j.at("values").is_array()) detail::config_fail(where, "tabulated needs 'values'");
    TabulatedSpec s;
    for (std::size_t k = 0; k < j.at("values").size(); ++k) {
      s.values.push_back(parse_complex(j.at("values")[k], where + ".values[" + std::to_string(k) + "]"));
    }
    return s;
  }
  throw Error(ErrorKind::UnknownSpec, where + ": unknown function type '" + type + "'");
}

inline ModelParams parse_model(const Json& j) {
  const std::string w = "model";
  detail::require_object(j, w);
  detail::reject_unknown(j, w, {"kind", "m", "lambda1", "lambda2", "lambda3", "c1", "c2", "c3", "c4"});
  const auto kind = detail::get_string(j, "kind", "mdtgn", w);
  const double m = detail::get_number(j, "m", 0.0, w);
  if (!(m >= 0.0)) detail::config_fail(w + ".m", "mass must be nonnegative");
  if (kind == "mdtgn") {
    return ModelParams::mdtgn(m, detail::get_number(j, "lambda1", 0.0, w), detail::get_number(j, "lambda2", 0.0, w),
                              detail::get_number(j, "lambda3", 0.0, w));
  }
  if (kind == "quadratic") {
    auto c = [&](const char* key) { return j.contains(key) ? parse_complex(j.at(key), w + "." + key) : Complex{}; };
    return ModelParams::quadratic(m, c("c1"), c("c2"), c("c3"), c("c4"));
  }
  detail::config_fail(w + ".kind", "expected 'mdtgn' or 'quadratic'");
}

inline SolverConfig parse_solver(const Json& j) {
  const std::string w = "solver";
  detail::require_object(j, w);
  detail::reject_unknown(j, w, {"scheme", "epsilon0", "picard_tol", "max_iter", "pad", "strict_smallness"});
  SolverConfig c;
  const auto scheme = detail::get_string(j, "scheme", "picard", w);
  if (scheme == "picard") c.scheme = Scheme::picard;
  else if (scheme == "splitstep") c.scheme = Scheme::splitstep;
  else detail::config_fail(w + ".scheme", "expected 'picard' or 'splitstep'");
  c.epsilon0 = detail::get_number(j, "epsilon0", c.epsilon0, w);
  c.picard_tol = detail::get_number(j, "picard_tol", c.picard_tol, w);
  c.max_iter = detail::get_int(j, "max_iter", c.max_iter, w);
  c.pad = detail::get_number(j, "pad", c.pad, w);
  c.strict_smallness = detail::get_bool(j, "strict_smallness", c.strict_smallness, w);
  try {
    c.validate();
  } catch (const Error& e) {
    detail::config_fail(w, e.what());
  }
  return c;
}

inline RunConfig parse_config(const Json& j) {
  detail::require_object(j, "config");
  detail::reject_unknown(j, "config",
                         {"name", "model", "grid", "data", "solver", "estimates", "norms", "convergence", "gauge",
                          "global"});
  RunConfig rc;
  auto& s = rc.scenario;
  s.name = detail::get_string(j, "name", "run", "config");
  if (j.contains("model")) s.params = parse_model(j.at("model"));
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    detail::require_object(g, "grid");
    detail::reject_unknown(g, "grid", {"x_min", "x_max", "dx", "T"});
    s.x_min = detail::get_number(g, "x_min", s.x_min, "grid");
    s.x_max = detail::get_number(g, "x_max", s.x_max, "grid");
    rc.dx = detail::get_number(g, "dx", rc.dx, "grid");
    s.T = detail::get_number(g, "T", s.T, "grid");
    if (!(s.x_max > s.x_min) || !(rc.dx > 0.0) || !(s.T >= 0.0)) detail::config_fail("grid", "invalid extent");
  }
  if (j.contains("data")) {
    const auto& d = j.at("data");
    detail::require_object(d, "data");
    detail::reject_unknown(d, "data", {"f", "g", "a0", "a1", "E0", "kappa"});
    if (d.contains("f")) s.data.f = parse_function_spec(d.at("f"), "data.f");
    if (d.contains("g")) s.data.g = parse_function_spec(d.at("g"), "data.g");
    if (d.contains("a0")) s.data.a0 = parse_function_spec(d.at("a0"), "data.a0");
    if (d.contains("a1")) s.data.a1 = parse_function_spec(d.at("a1"), "data.a1");
    if (d.contains("E0")) s.data.E0 = parse_function_spec(d.at("E0"), "data.E0");
    s.data.kappa = detail::get_number(d, "kappa", 0.0, "data");
  }
  if (j.contains("solver")) s.config = parse_solver(j.at("solver"));
  if (j.contains("estimates")) {
    const auto& e = j.at("estimates");
    const std::string w = "estimates";
    detail::require_object(e, w);
    detail::reject_unknown(e, w,
                           {"trials", "threads", "seed", "max_bumps", "amplitude_min", "amplitude_max", "width_min",
                            "width_max", "center_min", "center_max", "speed_max", "omega_max"});
    auto& o = rc.estimates;
    o.trials = detail::get_int(e, "trials", o.trials, w);
    o.threads = detail::get_int(e, "threads", o.threads, w);
    if (e.contains("seed")) {
      if (!e.at("seed").is_number_unsigned()) detail::config_fail(w + ".seed", "expected a nonnegative integer");
      o.field.seed = e.at("seed").get<std::uint64_t>();
    }
    o.field.max_bumps = detail::get_int(e, "max_bumps", o.field.max_bumps, w);
    o.field.amplitude_min = detail::get_number(e, "amplitude_min", o.field.amplitude_min, w);
    o.field.amplitude_max = detail::get_number(e, "amplitude_max", o.field.amplitude_max, w);
    o.field.width_min = detail::get_number(e, "width_min", o.field.width_min, w);
    o.field.width_max = detail::get_number(e, "width_max", o.field.width_max, w);
    o.field.center_min = detail::get_number(e, "center_min", o.field.center_min, w);
    o.field.center_max = detail::get_number(e, "center_max", o.field.center_max, w);
    o.field.speed_max = detail::get_number(e, "speed_max", o.field.speed_max, w);
    o.field.omega_max = detail::get_number(e, "omega_max", o.field.omega_max, w);
  }
  if (j.contains("norms")) {
    detail::require_object(j.at("norms"), "norms");
    detail::reject_unknown(j.at("norms"), "norms", {"T"});
    rc.norms.T = detail::get_number(j.at("norms"), "T", 0.0, "norms");
  }
  if (j.contains("convergence")) {
    const auto& c = j.at("convergence");
    detail::require_object(c, "convergence");
    detail::reject_unknown(c, "convergence", {"dx", "min_order"});
    if (c.contains("dx")) {
      if (!c.at("dx").is_array() || c.at("dx").size() < 2) detail::config_fail("convergence.dx", "need >= 2 values");
      rc.convergence.dx.clear();
      for (const auto& v : c.at("dx")) {
        if (!v.is_number() || !(v.get<double>() > 0.0)) detail::config_fail("convergence.dx", "expected positive numbers");
        rc.convergence.dx.push_back(v.get<double>());
      }
    }
    rc.convergence.min_order = detail::get_number(c, "min_order", rc.convergence.min_order, "convergence");
  }
  if (j.contains("gauge")) {
    const auto& g = j.at("gauge");
    detail::require_object(g, "gauge");
    detail::reject_unknown(g, "gauge", {"a0_target", "a1_target"});
    if (g.contains("a0_target")) rc.gauge.a0_target = parse_function_spec(g.at("a0_target"), "gauge.a0_target");
    if (g.contains("a1_target")) rc.gauge.a1_target = parse_function_spec(g.at("a1_target"), "gauge.a1_target");
  }
  if (j.contains("global")) {
    detail::require_object(j.at("global"), "global");
    detail::reject_unknown(j.at("global"), "global", {"tau"});
    rc.global.tau = detail::get_number(j.at("global"), "tau", rc.global.tau, "global");
  }
  return rc;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot read " + path.string());
  Json j;
  try {
    j = Json::parse(in, nullptr, true, true);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ConfigError, path.string() + ": " + e.what());
  }
  return parse_config(j);
}

// ---------------------------------------------------------------------------
// Writers.

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + path.string());
  return out;
}

/// Columns x, t, re_u, im_u, re_v, im_v, A0, A1, E; one row per node per layer.
inline void write_fields_csv(std::ostream& out, const SolutionHistory& sol) {
  const auto& g = sol.grid();
  const bool has_em = sol.em.A0.values().size() == sol.spinor.u.values().size();
  out << "x,t,re_u,im_u,re_v,im_v,A0,A1,E\n";
  std::string row;
  for (int n = 0; n <= g.n_t; ++n) {
    for (int i = 0; i < g.n_x; ++i) {
      const Complex u = sol.spinor.u(i, n), v = sol.spinor.v(i, n);
      row.clear();
      for (double x : {g.x(i), g.t(n), u.real(), u.imag(), v.real(), v.imag(), has_em ? sol.em.A0(i, n) : 0.0,
                       has_em ? sol.em.A1(i, n) : 0.0, has_em ? sol.em.E(i, n) : 0.0}) {
        if (!row.empty()) row += ',';
        row += format_double(x);
      }
      row += '\n';
      out << row;
    }
  }
}

inline void write_fields_csv(const std::filesystem::path& path, const SolutionHistory& sol) {
  auto out = open_output(path);
  write_fields_csv(out, sol);
}

inline Json report_to_json(const CheckReport& r) {
  auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  return Json{{"name", r.name},       {"lhs", num(r.lhs)},   {"rhs", num(r.rhs)},
              {"margin", num(r.margin)}, {"pass", r.pass},   {"context", r.context},
              {"allowance", num(r.allowance)}};
}

inline Json reports_to_json(const std::vector<CheckReport>& reports) {
  Json arr = Json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  return arr;
}

inline void write_reports(const std::filesystem::path& path, const std::vector<CheckReport>& reports) {
  auto out = open_output(path);
  out << reports_to_json(reports).dump(2) << '\n';
}

/// Two-column (t, value) series for external plotting.
inline void write_series(const std::filesystem::path& path, const std::vector<double>& t,
                         const std::vector<double>& values) {
  if (t.size() != values.size()) throw Error(ErrorKind::InvalidArgument, "series columns differ in length");
  auto out = open_output(path);
  out << "t,value\n";
  for (std::size_t k = 0; k < t.size(); ++k) out << format_double(t[k]) << ',' << format_double(values[k]) << '\n';
}

}  // namespace mdtgn
