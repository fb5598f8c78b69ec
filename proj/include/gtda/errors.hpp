#pragma once

#include <stdexcept>
#include <string>

namespace gtda {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or size mismatch between inputs.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid values in input data (NaN/Inf, inconsistent label files).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Graph construction called on inputs it cannot handle (e.g. n < 2).
class GraphError : public Error {
 public:
  using Error::Error;
};

/// Invalid strategy-profile initialization (labels out of range, prior rows
/// not on the simplex).
class InitError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (empty hyperparameter grid, missing class, bad alpha).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appearing mid-computation. Signals a bug or an input that
/// escaped validation, not a user mistake.
class NumericsError : public Error {
 public:
  using Error::Error;
};

/// Linear system without a unique solution (unlabeled component disconnected
/// from every labeled node).
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, const std::string& path, long line)
      : Error(path + ":" + std::to_string(line) + ": " + message), line_(line) {}
  explicit ParseError(const std::string& message) : Error(message) {}

  long line() const noexcept { return line_; }

 private:
  long line_ = -1;
};

}  // namespace gtda
