#include "stableflows/core/vec.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace stableflows::vec {

#if !defined(SFLOW_HAVE_AVX2_TU)
namespace detail {
const Ops* avx2_ops() { return nullptr; }
}  // namespace detail
#endif

namespace {

std::atomic<Backend> g_requested{Backend::Auto};

Backend env_backend() {
  const char* e = std::getenv("STABLEFLOWS_SIMD");
  if (!e) return Backend::Auto;
  if (std::strcmp(e, "scalar") == 0) return Backend::Scalar;
  if (std::strcmp(e, "avx2") == 0) return Backend::Avx2;
  return Backend::Auto;
}

const detail::Ops& resolve() {
  Backend want = g_requested.load();
  if (want == Backend::Auto) want = env_backend();
  if (want != Backend::Scalar) {
    if (const detail::Ops* ops = detail::avx2_ops()) return *ops;
  }
  return detail::scalar_ops();
}

}  // namespace

void set_backend(Backend b) { g_requested.store(b); }

Backend active_backend() {
  return &resolve() == detail::avx2_ops() ? Backend::Avx2 : Backend::Scalar;
}

std::string backend_name() {
  return active_backend() == Backend::Avx2 ? "avx2" : "scalar";
}

double sum(const double* x, std::size_t n) { return resolve().sum(x, n); }
double dot(const double* a, const double* b, std::size_t n) {
  return resolve().dot(a, b, n);
}
void axpy(double a, const double* x, double* y, std::size_t n) {
  resolve().axpy(a, x, y, n);
}
double max_abs(const double* x, std::size_t n) { return resolve().max_abs(x, n); }
double abs_pow_sum(const double* x, std::size_t n, double p) {
  return resolve().abs_pow_sum(x, n, p);
}
double weighted_abs_pow_sum(const double* w, const double* x, std::size_t n,
                            double p) {
  return resolve().weighted_abs_pow_sum(w, x, n, p);
}
void abs_pow(const double* x, std::size_t n, double p, double* out) {
  resolve().abs_pow(x, n, p, out);
}

}  // namespace stableflows::vec
