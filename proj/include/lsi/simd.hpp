#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace lsi::simd {

enum class Backend { scalar, avx2 };

// One Gaussian component in log form: log_scale = log(w) - 0.5*log(2*pi*var).
struct MixtureTerm {
  double log_scale;
  double mean;
  double inv_variance;
};

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  // out[i] = exp(c0 + c1*x[i] + c2*x[i]^2)
  void (*exp_quadratic)(double c0, double c1, double c2, const double* x, double* out,
                        std::size_t n);
  // Orthonormal Hermite series sum c_k h_k(x) with first and second derivatives.
  void (*hermite_series)(const double* coeffs, std::size_t ncoeff, const double* x,
                         double* value, double* d1, double* d2, std::size_t n);
  // log f, (log f)', (log f)'' for a mixture density f.
  void (*mixture_log_density)(const MixtureTerm* terms, std::size_t nterms, const double* x,
                              double* log_f, double* dlog, double* d2log, std::size_t n);
};

namespace scalar {
const KernelTable& table();
}
#if defined(LSI_HAVE_AVX2)
namespace avx2 {
const KernelTable& table();
}
#endif

bool backend_available(Backend b);
Backend active_backend();
// Throws std::invalid_argument when the backend is not available on this machine.
void set_backend(Backend b);
std::string_view backend_name(Backend b);
const KernelTable& kernels();
const KernelTable& kernels(Backend b);

double dot(std::span<const double> a, std::span<const double> b);
void exp_quadratic(double c0, double c1, double c2, std::span<const double> x,
                   std::span<double> out);
void hermite_series(std::span<const double> coeffs, std::span<const double> x,
                    std::span<double> value, std::span<double> d1, std::span<double> d2);
void mixture_log_density(std::span<const MixtureTerm> terms, std::span<const double> x,
                         std::span<double> log_f, std::span<double> dlog,
                         std::span<double> d2log);

}  // namespace lsi::simd
