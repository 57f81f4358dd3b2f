#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace causalflip {

// Base of every error the library throws. Subclasses name the contract that
// was broken so callers (and the CLI exit path) can tell them apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based; 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// A caller passed arguments that violate an operation's precondition.
class UsageError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Not enough event triples to fill a category.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Q1/Q2 balance cannot be achieved exactly.
class BalanceError : public Error {
 public:
  using Error::Error;
};

// An embedding table does not cover every question.
class CoverageError : public Error {
 public:
  using Error::Error;
};

// An evaluation record references an unknown question.
class JoinError : public Error {
 public:
  using Error::Error;
};

// Operation not defined for the sample's training mode.
class ModeError : public Error {
 public:
  using Error::Error;
};

}  // namespace causalflip
