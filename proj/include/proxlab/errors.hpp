#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace proxlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input text or arguments could not be understood.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InputError("parse error at line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnknownBuiltin : public InputError {
 public:
  explicit UnknownBuiltin(const std::string& name)
      : InputError("unknown builtin function '" + name + "'") {}
};

class DegreeTooHigh : public InputError {
 public:
  explicit DegreeTooHigh(std::size_t degree)
      : InputError("polynomial piece of degree " + std::to_string(degree) +
                   " exceeds the maximum degree 4") {}
};

class GridMismatch : public InputError {
 public:
  using InputError::InputError;
};

/// The requested operation is mathematically undefined for its inputs
/// (parameters beyond the prox-threshold, improper functions, ...).
class MathDomainError : public Error {
 public:
  using Error::Error;
};

class AllInfinite : public MathDomainError {
 public:
  AllInfinite() : MathDomainError("function is +inf at every grid node (not proper)") {}
};

class NotProxBounded : public MathDomainError {
 public:
  using MathDomainError::MathDomainError;
};

class LambdaAboveThreshold : public MathDomainError {
 public:
  using MathDomainError::MathDomainError;
};

class MuAboveThreshold : public MathDomainError {
 public:
  using MathDomainError::MathDomainError;
};

class ParameterOrder : public MathDomainError {
 public:
  using MathDomainError::MathDomainError;
};

class AlphaEndpoint : public MathDomainError {
 public:
  using MathDomainError::MathDomainError;
};

class SingularMatrix : public MathDomainError {
 public:
  using MathDomainError::MathDomainError;
};

class NotPositiveDefinite : public MathDomainError {
 public:
  using MathDomainError::MathDomainError;
};

}  // namespace proxlab
