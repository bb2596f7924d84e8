#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hermiflow {

/// Machine-readable failure categories. Every thrown hermiflow::Error carries one.
enum class ErrorCode {
  SlotOutOfRange,
  DimensionMismatch,
  VarianceMismatch,
  WrongOrder,
  NotAlmostComplex,   // J^2 != -I
  Incompatible,       // J^T g J != g
  NotPositiveDefinite,
  Singular,
  Jacobi,
  InconsistentInputs,
  Syntax,
  ClassMismatch,
  UnknownScenario,
  InvalidArgument,
  Io,
};

/// Stable diagnostic token, e.g. "J_SQUARED" or "JACOBI".
std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Error raised while reading a scenario file. line() is 1-based; 0 means
/// the problem is not tied to a single line (e.g. a failed invariant).
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, int line, const std::string& what)
      : Error(code, what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace hermiflow
