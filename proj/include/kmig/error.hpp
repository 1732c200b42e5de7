#pragma once

#include <stdexcept>
#include <string>

namespace kmig {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration, scene, or option values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// 1-based station index outside the array.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Input data inconsistent with the array geometry (off-grid angles, wrong mask).
class GeometryMismatch : public Error {
 public:
  using Error::Error;
};

/// Conflicting duplicate measurements.
class AmbiguityError : public Error {
 public:
  using Error::Error;
};

/// A required measured entry is missing.
class IncompleteData : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point coincides with (or is not separated from) a station or source.
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedScene : public Error {
 public:
  using Error::Error;
};

}  // namespace kmig
