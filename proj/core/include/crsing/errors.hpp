#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crs {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed series literal or input file.  Carries a 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Input is well-formed but violates a precondition of the requested
/// computation (non-normal defining series, constant term in a system, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operands live in different variable spaces or have incompatible shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A non-unit was inverted, or an exact division left a remainder.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

/// A structural identity that must hold for valid input failed, e.g. the
/// Levi matrix is not divisible by s^m.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// The truncation order is too small to determine the requested quantity.
class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace crs
