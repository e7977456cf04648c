#include "lsi/simd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lsi::simd::scalar {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void exp_quadratic(double c0, double c1, double c2, const double* x, double* out,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(c0 + x[i] * (c1 + c2 * x[i]));
}

void hermite_series(const double* c, std::size_t nc, const double* x, double* value,
                    double* d1, double* d2, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    double hm1 = 0.0;
    double h = 1.0;
    double v = 0.0, g = 0.0, gg = 0.0;
    for (std::size_t k = 0; k < nc; ++k) {
      v += c[k] * h;
      if (k + 1 < nc) g += c[k + 1] * std::sqrt(double(k + 1)) * h;
      if (k + 2 < nc) gg += c[k + 2] * std::sqrt(double(k + 2) * double(k + 1)) * h;
      const double hn = (xi * h - std::sqrt(double(k)) * hm1) / std::sqrt(double(k + 1));
      hm1 = h;
      h = hn;
    }
    value[i] = v;
    d1[i] = g;
    d2[i] = gg;
  }
}

void mixture_log_density(const MixtureTerm* t, std::size_t nt, const double* x, double* log_f,
                         double* dlog, double* d2log, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    double lmax = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nt; ++j) {
      const double z = xi - t[j].mean;
      lmax = std::max(lmax, t[j].log_scale - 0.5 * z * z * t[j].inv_variance);
    }
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      const double z = xi - t[j].mean;
      const double e = std::exp(t[j].log_scale - 0.5 * z * z * t[j].inv_variance - lmax);
      const double g = -z * t[j].inv_variance;
      s0 += e;
      s1 += e * g;
      s2 += e * (g * g - t[j].inv_variance);
    }
    const double r1 = s1 / s0;
    log_f[i] = lmax + std::log(s0);
    dlog[i] = r1;
    d2log[i] = s2 / s0 - r1 * r1;
  }
}

const KernelTable kTable{dot, exp_quadratic, hermite_series, mixture_log_density};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace lsi::simd::scalar
