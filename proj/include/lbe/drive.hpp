#pragma once

#include <string>
#include <vector>

namespace lbe {

/// Real time-dependent coefficient of an operator term (hbar = 1, rates in 1/time).
class DriveSignal {
 public:
  enum class Kind { constant, cosine, tabulated };

  /// Defaults to the constant zero signal.
  DriveSignal() = default;

  static DriveSignal constant(double value);
  /// amplitude * cos(omega * t)
  static DriveSignal cosine(double amplitude, double omega);
  /// Piecewise-linear through (times[i], values[i]); times strictly ascending.
  static DriveSignal tabulated(std::vector<double> times, std::vector<double> values);

  /// Throws InvalidInput for t < 0, or for t outside the grid of a tabulated signal.
  double operator()(double t) const;

  Kind kind() const noexcept { return kind_; }
  double amplitude() const noexcept { return amplitude_; }
  double omega() const noexcept { return omega_; }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Short human-readable form, e.g. "45*cos(1*t)".
  std::string describe() const;

 private:
  Kind kind_ = Kind::constant;
  double amplitude_ = 0.0;  // constant value, or cosine amplitude
  double omega_ = 0.0;
  std::vector<double> times_;
  std::vector<double> values_;
};

}  // namespace lbe
