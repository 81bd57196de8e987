#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nearkit {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument: shape mismatch, violated precondition, bad descriptor.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The constraint set is empty (e.g. an inconsistent FXG = H).
class InfeasibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A decomposition or iteration failed, or an iterate became non-finite.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The (constraint, multiplier) combination has no exact solver here.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace nearkit
