#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pif {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Caller handed us an argument that is out of domain (negative delay,
// non-finite score, zero participants, ...).
class InputError : public Error {
public:
  using Error::Error;
};

// A document (trace, CSV, config, param-set JSON) could not be decoded.
// line() is 1-based; 0 means "not tied to a particular line".
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::int64_t line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::int64_t line() const noexcept { return line_; }

private:
  std::int64_t line_ = 0;
};

// Decoded fine but violates a semantic rule (event ordering, duplicate
// ratings, inconsistent metadata, ...).
class ValidationError : public Error {
public:
  using Error::Error;
};

// Not enough data to compute the requested quantity (no cycles in a trace,
// fewer points than parameters, ...).
class InsufficientDataError : public Error {
public:
  using Error::Error;
};

// A task name was used where only tasks with fitted constants are allowed.
class UnsupportedTaskError : public Error {
public:
  using Error::Error;
};

// A fit could not be posed (collinear system, empty dataset after filtering).
class UnderdeterminedError : public Error {
public:
  using Error::Error;
};

// Iterative fit ran out of iterations without meeting the gradient tolerance.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

}  // namespace pif
