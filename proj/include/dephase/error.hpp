#pragma once

#include <stdexcept>
#include <string>

namespace dephase {

// Base for everything the library throws on a contract violation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (T <= 0, |x| > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature could not reach its tolerance within the panel budget.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double value, double achieved_error)
      : Error(what), value_(value), achieved_error_(achieved_error) {}

  double value() const noexcept { return value_; }
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double value_;
  double achieved_error_;
};

// A damped (t -> infinity) limit was requested for a closed (lambda = 0) evolution.
class EquilibriumUndefinedError : public Error {
 public:
  using Error::Error;
};

// A series did not satisfy its truncation criterion within the term budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Fixed-step integrator was given a step it cannot take stably.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

// Both exchange directions must have nonzero weight for a log-ratio.
class ZeroProbabilityError : public Error {
 public:
  using Error::Error;
};

// Malformed or out-of-range scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dephase
