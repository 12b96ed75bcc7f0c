// errors.hpp -- exception types thrown across module boundaries.
#pragma once

#include <stdexcept>
#include <string>

namespace fqnv {

// Requested integrator step violates the stability guard.  required_dt_ns is
// the largest step the guard would accept for the same generator.
class StepTooLargeError : public std::runtime_error {
 public:
  StepTooLargeError(double dt_ns, double required_dt_ns, const std::string& what)
      : std::runtime_error(what), dt_ns(dt_ns), required_dt_ns(required_dt_ns) {}
  double dt_ns;
  double required_dt_ns;
};

// Trajectories handed to an aggregator were not sampled on the same grid.
class GridMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A trace had too few extrema for frequency or envelope estimation.
class NoOscillationError : public std::runtime_error {
 public:
  explicit NoOscillationError(const std::string& what, int extrema_found = 0)
      : std::runtime_error(what), extrema_found(extrema_found) {}
  int extrema_found;
};

// Envelope regression failed (non-decaying envelope or residual too large).
class BadFitError : public std::runtime_error {
 public:
  explicit BadFitError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

// Oracle eigenbasis too ill-conditioned to invert reliably.
class IllConditionedError : public std::runtime_error {
 public:
  explicit IllConditionedError(const std::string& what, double condition = 0.0)
      : std::runtime_error(what), condition(condition) {}
  double condition;
};

// Configuration rejected: unknown key, bad value, or missing requirement.
class ConfigError : public std::runtime_error {
 public:
  enum class Kind { UnknownKey, TypeMismatch, MissingRequired, InvalidValue, Io };
  ConfigError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind(kind) {}
  Kind kind;
};

}  // namespace fqnv
