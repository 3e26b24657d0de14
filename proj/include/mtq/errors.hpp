#pragma once

#include <stdexcept>
#include <string>

namespace mtq {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A steady state was requested for a regime that has none (utilization >= 1).
class NoSteadyStateError : public Error {
 public:
  using Error::Error;
};

// Malformed scenario, configuration file, or method/profile mismatch.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Solver produced output that violates its invariants.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// Adaptive step size collapsed below the allowed minimum.
class StiffnessError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

// Explicit time step larger than the diffusion stability bound.
class StabilityError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

// A result is not representable as a finite double.
class OverflowError : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mtq
