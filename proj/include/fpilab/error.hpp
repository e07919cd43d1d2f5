#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fpilab {

enum class ErrorKind {
  invalid_resolution,
  grid_too_large,
  alignment_error,
  domain_error,
  too_coarse_for_gradient,
  format_error,
  data_error,
  not_a_weight,
  precondition_error,
  invalid_exponent,
  invalid_exponents,
  singular_evaluation,
  dimension_error,
  degenerate_pair,
  nothing_to_sweep,
  parse_error,
  numerical_error,
};

// Stable kebab-case name, used in CLI messages.
std::string_view error_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace fpilab
