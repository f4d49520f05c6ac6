#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stableflows/core/types.hpp"

namespace stableflows::classify {

/// A weight from the test class: nonnegative, nonincreasing in |t|, with
/// divergent integral (sum) on each half-line. The family orientation is
/// "decaying away from the origin"; monotonicity and divergence are verified
/// numerically by the property tests.
struct WeightFunction {
  std::string label;
  std::function<double(double)> eval;
};

/// Shipped family: (1+|t|)^-p for p in {0.5, 0.75, 1}, plus the
/// log-corrected 1/((1+|t|) log(e+|t|)) in continuous time. The log weight
/// diverges too slowly to be useful as divergence evidence within the
/// horizon budget, so it participates in convergence detection only.
std::vector<WeightFunction> shipped_weights(const TimeDomain& td);

/// Partial half-line integral (or sum) of w over [0, T], for the divergence
/// property checks.
double half_line_mass(const WeightFunction& w, double T, bool discrete);

}  // namespace stableflows::classify
