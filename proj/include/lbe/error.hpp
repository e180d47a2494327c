#pragma once

#include <stdexcept>
#include <string>

namespace lbe {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatches, non-square inputs, bad grids.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A density matrix failed a physical-state check (negative eigenvalue, trace).
class InvalidState : public Error {
 public:
  using Error::Error;
};

/// Adaptive integration could not meet the tolerance.
class IntegrationFailure : public Error {
 public:
  IntegrationFailure(const std::string& what, double last_good_time)
      : Error(what + " (last good time " + std::to_string(last_good_time) + ")"),
        last_good_time_(last_good_time) {}

  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

/// The Riccati variable crossed the pole guard and the linearized path is disabled.
class PoleProximity : public IntegrationFailure {
 public:
  using IntegrationFailure::IntegrationFailure;
};

/// A requested output time coincides with a zero of the linearized solution.
class PoleAtSample : public Error {
 public:
  PoleAtSample(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Scenario configuration could not be parsed or validated.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lbe
