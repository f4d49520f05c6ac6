#include <cmath>
#include <cstddef>

#include "stableflows/core/vec.hpp"

// Reference implementations. These define the semantics the SIMD variants
// are tested against.

namespace stableflows::vec::detail {

namespace {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double max_abs_scalar(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::fabs(x[i]);
    if (v > m) m = v;
  }
  return m;
}

double abs_pow_sum_scalar(const double* x, std::size_t n, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::pow(std::fabs(x[i]), p);
  return acc;
}

double weighted_abs_pow_sum_scalar(const double* w, const double* x,
                                   std::size_t n, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::pow(std::fabs(x[i]), p);
  return acc;
}

void abs_pow_scalar(const double* x, std::size_t n, double p, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(std::fabs(x[i]), p);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{sum_scalar,         dot_scalar,
                       axpy_scalar,        max_abs_scalar,
                       abs_pow_sum_scalar, weighted_abs_pow_sum_scalar,
                       abs_pow_scalar};
  return ops;
}

}  // namespace stableflows::vec::detail
