#pragma once

#include <cstddef>
#include <string>

namespace stableflows::vec {

// Data-parallel reduction kernels used by the quadrature, classification and
// simulation inner loops. Every operation has a scalar reference
// implementation and, on x86-64, an AVX2+FMA variant selected at runtime.
// The two are equivalence-tested against each other; callers may not rely on
// bit-identical results across backends, only across runs on one machine.

enum class Backend { Auto, Scalar, Avx2 };

/// Force a backend (env STABLEFLOWS_SIMD=scalar|avx2|auto does the same).
void set_backend(Backend b);
Backend active_backend();
std::string backend_name();

/// sum_i x[i]
double sum(const double* x, std::size_t n);
/// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);
/// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);
/// max_i |x[i]| (0 for empty input)
double max_abs(const double* x, std::size_t n);
/// sum_i |x[i]|^p, p > 0; finite inputs assumed
double abs_pow_sum(const double* x, std::size_t n, double p);
/// sum_i w[i] * |x[i]|^p
double weighted_abs_pow_sum(const double* w, const double* x, std::size_t n, double p);
/// out[i] = |x[i]|^p
void abs_pow(const double* x, std::size_t n, double p, double* out);

namespace detail {
struct Ops {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  double (*abs_pow_sum)(const double*, std::size_t, double);
  double (*weighted_abs_pow_sum)(const double*, const double*, std::size_t, double);
  void (*abs_pow)(const double*, std::size_t, double, double*);
};
const Ops& scalar_ops();
const Ops* avx2_ops();  // nullptr when the TU was not built or CPU lacks AVX2
}  // namespace detail

}  // namespace stableflows::vec
