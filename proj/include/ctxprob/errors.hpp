#pragma once

#include <stdexcept>
#include <string>

namespace ctxprob {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A frequency estimate was requested from an ensemble with no detections.
class ZeroEnsemble : public Error {
 public:
  using Error::Error;
};

/// lambda is undefined because one weighted branch probability is zero.
class DegenerateBranch : public Error {
 public:
  using Error::Error;
};

/// A forward transform produced a value that is not a probability.
class OutOfRange : public Error {
 public:
  OutOfRange(const std::string& what, double value) : Error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition (unvalidated model, coefficients not summing to 1).
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctxprob
