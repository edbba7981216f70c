#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace mdtgn {

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

/// One evaluated identity or inequality. `allowance` is the tolerance the
/// pass flag was computed with.
struct CheckReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< rhs - lhs
  bool pass = true;
  std::string context;
  double allowance = 0.0;
};

/// lhs <= rhs + rel_tol * max(|lhs|, |rhs|) + abs_tol
inline CheckReport check_le(std::string name, double lhs, double rhs, double rel_tol,
                            double abs_tol, std::string context = {}) {
  CheckReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.allowance = rel_tol * std::max(std::abs(lhs), std::abs(rhs)) + abs_tol;
  r.pass = std::isfinite(lhs) && std::isfinite(rhs) && lhs <= rhs + r.allowance;
  r.context = std::move(context);
  return r;
}

/// |lhs - rhs| <= rel_tol * max(|lhs|, |rhs|) + abs_tol
inline CheckReport check_eq(std::string name, double lhs, double rhs, double rel_tol,
                            double abs_tol, std::string context = {}) {
  CheckReport r = check_le(std::move(name), lhs, rhs, rel_tol, abs_tol, std::move(context));
  r.pass = std::isfinite(lhs) && std::isfinite(rhs) && std::abs(lhs - rhs) <= r.allowance;
  return r;
}

inline bool all_pass(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; });
}

inline const CheckReport* find_report(const std::vector<CheckReport>& reports,
                                      const std::string& name) {
  for (const auto& r : reports) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

}  // namespace mdtgn
