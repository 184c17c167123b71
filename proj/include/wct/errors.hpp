#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>

namespace wct {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched vector/support lengths.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Bad user-supplied data (empty logs, duplicate ids, malformed files).
class InputError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain (negative budget, q=0 support).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Problem size beyond what the implementation accepts.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Numerical failure (non-convergence, undefined statistic).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class UndefinedCorrelationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : InputError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace wct
