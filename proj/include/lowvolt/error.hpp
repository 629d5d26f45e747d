#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lowvolt {

enum class ErrorKind {
  Domain,           // argument outside the mathematical domain of a model
  InvalidParams,    // parameter set violates its invariants
  Infeasible,       // requested operating point is beyond the voltage cap
  OutOfRange,       // speedup table extrapolation
  EmptyRange,       // sweep over an empty core-count range
  InsufficientData, // too few calibration samples
  DegenerateData,   // samples cannot identify the model
  Underdetermined,  // collinear least-squares design
  NoFeasibleData,   // nothing plottable / no feasible plan rows
  Parse,            // malformed config text
  DataFormat,       // malformed data file (CSV)
  Validation,       // well-formed config with invariant violations
  Io,               // file could not be opened or written
  Internal,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Process exit status for each error category: config=2, infeasible=3,
/// data=4, internal=5.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::InvalidParams: return "invalid-params";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::EmptyRange: return "empty-range";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::DegenerateData: return "degenerate-data";
    case ErrorKind::Underdetermined: return "underdetermined";
    case ErrorKind::NoFeasibleData: return "no-feasible-data";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::DataFormat: return "data-format";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Io: return "io";
    case ErrorKind::Internal: return "internal";
  }
  return "internal";
}

inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Validation:
    case ErrorKind::EmptyRange:
      return 2;
    case ErrorKind::Infeasible:
    case ErrorKind::NoFeasibleData:
      return 3;
    case ErrorKind::InsufficientData:
    case ErrorKind::DegenerateData:
    case ErrorKind::Underdetermined:
    case ErrorKind::DataFormat:
    case ErrorKind::Io:
      return 4;
    case ErrorKind::Domain:
    case ErrorKind::InvalidParams:
    case ErrorKind::OutOfRange:
    case ErrorKind::Internal:
      return 5;
  }
  return 5;
}

}  // namespace lowvolt
