#pragma once

#include <stdexcept>
#include <string>

namespace tsclust {

enum class ErrorCode {
  invalid_input,
  shape_mismatch,
  too_short,
  unknown_measure,
  empty_input,
  parse_error,
  unsupported_dataset,
  degenerate,
  undefined_test,
  overwrite_refused,
  io_error,
  unsupported_operation,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code so the
/// C layer can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace tsclust
