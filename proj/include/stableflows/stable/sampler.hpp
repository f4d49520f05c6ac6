#pragma once

#include <cmath>
#include <stdexcept>

#include "stableflows/core/rng.hpp"
#include "stableflows/core/types.hpp"

namespace stableflows::stable {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// One draw of a symmetric alpha-stable variable with
/// E exp(i theta X) = exp(-scale^alpha |theta|^alpha).
///
/// Trigonometric transform of (uniform angle, exponential): exact in law,
/// no rejection. The alpha = 1 case reduces to scale * tan(theta).
inline double sample_sas(const StabilityIndex& alpha, const StableScale& scale,
                         RngStream& rng) {
  const double a = alpha.value();
  const double sigma = scale.value();
  if (sigma == 0.0) return 0.0;
  const double theta = kPi * (rng.uniform01() - 0.5);  // uniform (-pi/2, pi/2)
  const double w = rng.exponential();
  if (a == 1.0) return sigma * std::tan(theta);
  const double s = std::sin(a * theta) / std::pow(std::cos(theta), 1.0 / a);
  const double tail =
      std::pow(std::cos((1.0 - a) * theta) / w, (1.0 - a) / a);
  return sigma * s * tail;
}

/// One draw of a standard positive strictly stable variable with Laplace
/// transform E exp(-s W) = exp(-s^index), 0 < index < 1.
inline double sample_positive_stable(double index, RngStream& rng) {
  if (!(index > 0.0 && index < 1.0))
    throw std::invalid_argument(
        "sample_positive_stable: index must lie strictly inside (0, 1)");
  const double rho = index;
  const double u = kPi * rng.uniform01();  // uniform (0, pi)
  const double e = rng.exponential();
  const double ratio = (1.0 - rho) / rho;
  return std::sin(rho * u) * std::pow(std::sin((1.0 - rho) * u) / e, ratio) /
         std::pow(std::sin(u), 1.0 / rho);
}

/// Normalizing constant of the arrival-time series representation:
/// c_alpha = (integral_0^inf x^-alpha sin x dx)^-1
///         = ((pi/2) Gamma(1+u) sinc(pi u / 2))^-1 with u = 1 - alpha,
/// a form that stays stable through alpha = 1 (where c_1 = 2/pi).
inline double series_constant(double alpha) {
  const double u = 1.0 - alpha;
  const double z = 0.5 * kPi * u;
  const double sinc = std::fabs(z) < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
  return 1.0 / (0.5 * kPi * std::tgamma(1.0 + u) * sinc);
}

}  // namespace stableflows::stable
