#pragma once

#include <stdexcept>
#include <string>

namespace minext {

/// Base class of every error raised by an operation of the library.
/// Precondition violations on argument shape use std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class EmptyConstraint : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class ZeroSignal : public Error {
 public:
  using Error::Error;
};

/// Gaussian scale outside 1/r < a < d, a >= 10.
class InadmissibleScale : public Error {
 public:
  using Error::Error;
};

class CannotSatisfyMassCondition : public Error {
 public:
  using Error::Error;
};

}  // namespace minext
