#include "tsclust/error.hpp"

namespace tsclust {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid input";
    case ErrorCode::shape_mismatch: return "shape mismatch";
    case ErrorCode::too_short: return "series too short";
    case ErrorCode::unknown_measure: return "unknown measure";
    case ErrorCode::empty_input: return "empty input";
    case ErrorCode::parse_error: return "parse error";
    case ErrorCode::unsupported_dataset: return "unsupported dataset";
    case ErrorCode::degenerate: return "degenerate clustering";
    case ErrorCode::undefined_test: return "undefined test";
    case ErrorCode::overwrite_refused: return "overwrite refused";
    case ErrorCode::io_error: return "i/o error";
    case ErrorCode::unsupported_operation: return "unsupported operation";
  }
  return "unknown error";
}

}  // namespace tsclust
