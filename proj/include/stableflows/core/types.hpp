#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace stableflows {

/// Stability index of a symmetric stable law, 0 < alpha < 2 (open).
/// Values within 0.05 of either endpoint are rejected: the series and
/// quadrature tolerances used downstream are not calibrated there.
class StabilityIndex {
public:
  explicit StabilityIndex(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 2.0))
      throw std::invalid_argument("StabilityIndex: alpha must lie in (0, 2)");
    if (alpha < 0.05 || alpha > 1.99)
      throw std::invalid_argument(
          "StabilityIndex: alpha outside the supported range [0.05, 1.99]");
  }
  double value() const { return alpha_; }

private:
  double alpha_;
};

/// Scale parameter of a symmetric alpha-stable variable, sigma >= 0.
/// Convention used throughout: E exp(i theta X) = exp(-sigma^alpha |theta|^alpha).
class StableScale {
public:
  StableScale() : value_(0.0) {}
  explicit StableScale(double v) : value_(v) {
    if (!(v >= 0.0) || std::isnan(v))
      throw std::invalid_argument("StableScale: value must be >= 0");
  }
  double value() const { return value_; }

private:
  double value_;
};

/// Discrete (integer) vs continuous (real) time axis.
struct TimeDomain {
  enum class Kind { Discrete, Continuous };
  Kind kind = Kind::Continuous;

  bool discrete() const { return kind == Kind::Discrete; }
  static TimeDomain Z() { return {Kind::Discrete}; }
  static TimeDomain R() { return {Kind::Continuous}; }
};

/// One term of a finite linear combination sum_i c_i X(t_i).
struct Coeff {
  double c = 0.0;
  double t = 0.0;
};

/// Thrown when a numerical integral shows sustained growth instead of
/// converging; carries the dyadic partial means that triggered detection.
class DivergenceError : public std::runtime_error {
public:
  DivergenceError(const std::string& what, std::vector<double> partials)
      : std::runtime_error(what), partial_means(std::move(partials)) {}
  std::vector<double> partial_means;
};

}  // namespace stableflows
