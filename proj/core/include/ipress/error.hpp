#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ipress {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A symbol outside the alphabet, or an argument outside an operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Exact Birkhoff sum requested where the value is not unique on the cylinder.
class ModeError : public Error {
 public:
  using Error::Error;
};

/// An operation precondition does not hold (sign flags, collection kind, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An iterative method hit its cap. Carries the last certified bracket.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double lower, double upper)
      : Error(what), lower_(lower), upper_(upper) {}

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

/// A state space or enumeration exceeded its configured budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Configuration validation failure. `field` is a dotted path into the config.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace ipress
