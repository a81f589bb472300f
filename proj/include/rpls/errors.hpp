#pragma once

#include <stdexcept>
#include <string>

namespace rpls {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or otherwise unusable numeric input.
class InvalidInputError : public Error {
public:
  using Error::Error;
};

/// Inconsistent dimensions or hyperparameters.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A numerical kernel failed to converge.
class SolverError : public Error {
public:
  using Error::Error;
};

/// A metric is undefined for its arguments (e.g. NMSE against an all-zero truth).
class UndefinedMetricError : public Error {
public:
  using Error::Error;
};

/// Covariance too degenerate to define an ellipse.
class DegenerateError : public Error {
public:
  using Error::Error;
};

/// Malformed CSV or JSON input. `line` and `column` are 1-based, 0 when unknown.
class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t line = 0,
             std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

} // namespace rpls
