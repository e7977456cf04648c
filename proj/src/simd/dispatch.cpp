#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "lsi/simd.hpp"

namespace lsi::simd {
namespace {

Backend detect() {
#if defined(LSI_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::avx2;
#endif
  return Backend::scalar;
}

// LSI_SIMD=scalar forces the scalar kernels.
Backend initial() {
  const char* env = std::getenv("LSI_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return Backend::scalar;
  return detect();
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> b{initial()};
  return b;
}

}  // namespace

bool backend_available(Backend b) {
  if (b == Backend::scalar) return true;
  return detect() == Backend::avx2;
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument("simd backend not available: " + std::string(backend_name(b)));
  current().store(b, std::memory_order_relaxed);
}

std::string_view backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

const KernelTable& kernels(Backend b) {
#if defined(LSI_HAVE_AVX2)
  if (b == Backend::avx2) return avx2::table();
#endif
  (void)b;
  return scalar::table();
}

const KernelTable& kernels() { return kernels(active_backend()); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  return kernels().dot(a.data(), b.data(), a.size());
}

void exp_quadratic(double c0, double c1, double c2, std::span<const double> x,
                   std::span<double> out) {
  if (out.size() < x.size()) throw std::invalid_argument("exp_quadratic: output too short");
  kernels().exp_quadratic(c0, c1, c2, x.data(), out.data(), x.size());
}

void hermite_series(std::span<const double> coeffs, std::span<const double> x,
                    std::span<double> value, std::span<double> d1, std::span<double> d2) {
  if (value.size() < x.size() || d1.size() < x.size() || d2.size() < x.size())
    throw std::invalid_argument("hermite_series: output too short");
  kernels().hermite_series(coeffs.data(), coeffs.size(), x.data(), value.data(), d1.data(),
                           d2.data(), x.size());
}

void mixture_log_density(std::span<const MixtureTerm> terms, std::span<const double> x,
                         std::span<double> log_f, std::span<double> dlog,
                         std::span<double> d2log) {
  if (terms.empty()) throw std::invalid_argument("mixture_log_density: no components");
  if (log_f.size() < x.size() || dlog.size() < x.size() || d2log.size() < x.size())
    throw std::invalid_argument("mixture_log_density: output too short");
  kernels().mixture_log_density(terms.data(), terms.size(), x.data(), log_f.data(), dlog.data(),
                                d2log.data(), x.size());
}

}  // namespace lsi::simd
