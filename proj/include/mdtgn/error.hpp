#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdtgn {

enum class ErrorKind {
  NonCommensurate,
  UnknownSpec,
  SupportViolation,
  SmallnessViolated,
  NonConvergence,
  StepCollapse,
  ConeOutsideGrid,
  GridMismatch,
  InvalidArgument,
  ConfigError,
};

inline std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonCommensurate: return "NonCommensurate";
    case ErrorKind::UnknownSpec: return "UnknownSpec";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::SmallnessViolated: return "SmallnessViolated";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::StepCollapse: return "StepCollapse";
    case ErrorKind::ConeOutsideGrid: return "ConeOutsideGrid";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the named kinds above,
/// so callers (and the CLI) can report it by name.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace mdtgn
