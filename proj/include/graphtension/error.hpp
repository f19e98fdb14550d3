#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace graphtension {

/// Base class for every recoverable error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed but semantically invalid input (negative ids, empty sets, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Invalid solver or generator configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input for which the requested quantity does not exist (e.g. an edgeless graph).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Relative score requested against a zero reference energy.
class UndefinedScoreError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(what + " (best residual " + std::to_string(best_residual) + ")"),
        best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// Floating-point breakdown, e.g. an iteration that overflowed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace graphtension
