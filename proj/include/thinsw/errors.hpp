#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace thinsw {

enum class ErrorKind {
  Validation,
  Unsupported,
  Vacuum,
  Blowup,
  Conditioning,
  Precision,
  DegenerateChart,
  Solver,
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Vacuum: return "vacuum";
    case ErrorKind::Blowup: return "blowup";
    case ErrorKind::Conditioning: return "conditioning";
    case ErrorKind::Precision: return "precision";
    case ErrorKind::DegenerateChart: return "degenerate-chart";
    case ErrorKind::Solver: return "solver";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

/// Single exception type for the library; `kind` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::optional<double> time = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), time_(time) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Simulation time at which a numerical failure happened, when known.
  std::optional<double> time() const noexcept { return time_; }

  bool numerical() const noexcept {
    return kind_ == ErrorKind::Vacuum || kind_ == ErrorKind::Blowup ||
           kind_ == ErrorKind::Conditioning || kind_ == ErrorKind::Precision ||
           kind_ == ErrorKind::DegenerateChart || kind_ == ErrorKind::Solver;
  }

 private:
  ErrorKind kind_;
  std::optional<double> time_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace thinsw
