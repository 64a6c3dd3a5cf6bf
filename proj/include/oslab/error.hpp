#pragma once

#include <stdexcept>
#include <string>

namespace oslab {

enum class ErrorKind {
  invalid_argument,
  domain_exceeded,
  out_of_range,
  non_convex_input,
  indivisible_level,
  incompatible_tiling,
  support_too_close_to_boundary,
  exponent_out_of_range,
  zero_integral_test_function,
  insufficient_resolution,
  dimension_mismatch,
  parameter_window_violation,
  degenerate_cube,
  unsupported_dimension,
  unsupported_realization,
  empty_level_range,
  unknown_suite,
  io_error,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::domain_exceeded: return "domain-exceeded";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::non_convex_input: return "non-convex-input";
    case ErrorKind::indivisible_level: return "indivisible-level";
    case ErrorKind::incompatible_tiling: return "incompatible-tiling";
    case ErrorKind::support_too_close_to_boundary: return "support-too-close-to-boundary";
    case ErrorKind::exponent_out_of_range: return "exponent-out-of-range";
    case ErrorKind::zero_integral_test_function: return "zero-integral-test-function";
    case ErrorKind::insufficient_resolution: return "insufficient-resolution";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::parameter_window_violation: return "parameter-window-violation";
    case ErrorKind::degenerate_cube: return "degenerate-cube";
    case ErrorKind::unsupported_dimension: return "unsupported-dimension";
    case ErrorKind::unsupported_realization: return "unsupported-realization";
    case ErrorKind::empty_level_range: return "empty-level-range";
    case ErrorKind::unknown_suite: return "unknown-suite";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace oslab
