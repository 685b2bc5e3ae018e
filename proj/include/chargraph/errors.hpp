#pragma once

#include <stdexcept>
#include <string>

namespace chargraph {

// Base of every error the toolkit throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, malformed files, violated preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A probability model produced masses that do not normalize.
class ModelIntegrityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Exhaustive computation refused because the instance exceeds desk scale.
class GuardError : public Error {
 public:
  explicit GuardError(const std::string& what)
      : Error("desk-scale exceeded: " + what) {}
};

// Transmissions fail to determine some demanded output on a
// positive-probability input.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// A structural premise of a rate bound does not hold for the instance.
class PremiseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// An iterative solver stopped at its iteration cap above tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace chargraph
