#include "fpilab/error.hpp"

namespace fpilab {

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_resolution: return "invalid-resolution";
    case ErrorKind::grid_too_large: return "grid-too-large";
    case ErrorKind::alignment_error: return "alignment-error";
    case ErrorKind::domain_error: return "domain-error";
    case ErrorKind::too_coarse_for_gradient: return "too-coarse-for-gradient";
    case ErrorKind::format_error: return "format-error";
    case ErrorKind::data_error: return "data-error";
    case ErrorKind::not_a_weight: return "not-a-weight";
    case ErrorKind::precondition_error: return "precondition-error";
    case ErrorKind::invalid_exponent: return "invalid-exponent";
    case ErrorKind::invalid_exponents: return "invalid-exponents";
    case ErrorKind::singular_evaluation: return "singular-evaluation";
    case ErrorKind::dimension_error: return "dimension-error";
    case ErrorKind::degenerate_pair: return "degenerate-pair";
    case ErrorKind::nothing_to_sweep: return "nothing-to-sweep";
    case ErrorKind::parse_error: return "parse-error";
    case ErrorKind::numerical_error: return "numerical-error";
  }
  return "unknown-error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace fpilab
