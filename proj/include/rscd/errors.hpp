#pragma once

#include <stdexcept>
#include <string>

namespace rscd {

// Base of every library error. Callers that only care about "something was
// rejected" catch this; the CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  enum class Reason {
    kRange,
    kNotCoprime,
    kNonPositiveScale,
    kOutsideTypeI,
  };

  InvalidParameter(Reason reason, const std::string& what)
      : Error(what), reason_(reason) {}
  explicit InvalidParameter(const std::string& what)
      : InvalidParameter(Reason::kRange, what) {}

  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A sine in a denominator dropped below the pole threshold.
class SingularValue : public Error {
 public:
  using Error::Error;
};

class OutsideConfigurationSpace : public Error {
 public:
  using Error::Error;
};

class IllConditionedSampling : public Error {
 public:
  using Error::Error;
};

class Degeneracy : public Error {
 public:
  using Error::Error;
};

class FormulaViolation : public Error {
 public:
  using Error::Error;
};

class SpectralMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace rscd
