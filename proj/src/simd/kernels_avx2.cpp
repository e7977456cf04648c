#include "lsi/simd.hpp"

#if defined(LSI_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <limits>
#include <vector>

namespace lsi::simd::avx2 {
namespace {

inline __m256d exp_pd(__m256d x) {
  const __m256d hi = _mm256_set1_pd(709.0);
  const __m256d lo = _mm256_set1_pd(-708.39);
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);
  const __m256d k =
      _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, ln2hi, x);
  r = _mm256_fnmadd_pd(k, ln2lo, r);
  static constexpr double c[14] = {1.0,
                                   1.0,
                                   1.0 / 2,
                                   1.0 / 6,
                                   1.0 / 24,
                                   1.0 / 120,
                                   1.0 / 720,
                                   1.0 / 5040,
                                   1.0 / 40320,
                                   1.0 / 362880,
                                   1.0 / 3628800,
                                   1.0 / 39916800,
                                   1.0 / 479001600,
                                   1.0 / 6227020800.0};
  __m256d p = _mm256_set1_pd(c[13]);
  for (int j = 12; j >= 0; --j) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(c[j]));
  const __m128i k32 = _mm256_cvtpd_epi32(k);
  __m256i k64 = _mm256_cvtepi32_epi64(k32);
  k64 = _mm256_add_epi64(k64, _mm256_set1_epi64x(1023));
  k64 = _mm256_slli_epi64(k64, 52);
  const __m256d scale = _mm256_castsi256_pd(k64);
  const __m256d res = _mm256_mul_pd(p, scale);
  return _mm256_blendv_pd(res, _mm256_setzero_pd(), under);
}

double hsum(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return (t[0] + t[1]) + (t[2] + t[3]);
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4)
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void exp_quadratic(double c0, double c1, double c2, const double* x, double* out,
                   std::size_t n) {
  const __m256d v0 = _mm256_set1_pd(c0);
  const __m256d v1 = _mm256_set1_pd(c1);
  const __m256d v2 = _mm256_set1_pd(c2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d arg = _mm256_fmadd_pd(xv, _mm256_fmadd_pd(v2, xv, v1), v0);
    _mm256_storeu_pd(out + i, exp_pd(arg));
  }
  for (; i < n; ++i) out[i] = std::exp(c0 + x[i] * (c1 + c2 * x[i]));
}

void hermite_series(const double* c, std::size_t nc, const double* x, double* value,
                    double* d1, double* d2, std::size_t n) {
  std::vector<double> sq(nc + 2), isq(nc + 2);
  for (std::size_t k = 0; k < nc + 2; ++k) {
    sq[k] = std::sqrt(double(k));
    isq[k] = k ? 1.0 / sq[k] : 0.0;
  }
  std::vector<double> g1(nc, 0.0), g2(nc, 0.0);
  for (std::size_t k = 0; k < nc; ++k) {
    if (k + 1 < nc) g1[k] = c[k + 1] * sq[k + 1];
    if (k + 2 < nc) g2[k] = c[k + 2] * sq[k + 2] * sq[k + 1];
  }
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    __m256d hm1 = _mm256_setzero_pd();
    __m256d h = _mm256_set1_pd(1.0);
    __m256d v = _mm256_setzero_pd(), g = _mm256_setzero_pd(), gg = _mm256_setzero_pd();
    for (std::size_t k = 0; k < nc; ++k) {
      v = _mm256_fmadd_pd(_mm256_set1_pd(c[k]), h, v);
      g = _mm256_fmadd_pd(_mm256_set1_pd(g1[k]), h, g);
      gg = _mm256_fmadd_pd(_mm256_set1_pd(g2[k]), h, gg);
      const __m256d t = _mm256_fnmadd_pd(_mm256_set1_pd(sq[k]), hm1, _mm256_mul_pd(xv, h));
      hm1 = h;
      h = _mm256_mul_pd(t, _mm256_set1_pd(isq[k + 1]));
    }
    _mm256_storeu_pd(value + i, v);
    _mm256_storeu_pd(d1 + i, g);
    _mm256_storeu_pd(d2 + i, gg);
  }
  if (i < n) scalar::table().hermite_series(c, nc, x + i, value + i, d1 + i, d2 + i, n - i);
}

void mixture_log_density(const MixtureTerm* t, std::size_t nt, const double* x, double* log_f,
                         double* dlog, double* d2log, std::size_t n) {
  std::size_t i = 0;
  const __m256d half = _mm256_set1_pd(0.5);
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    __m256d lmax = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < nt; ++j) {
      const __m256d z = _mm256_sub_pd(xv, _mm256_set1_pd(t[j].mean));
      const __m256d q = _mm256_mul_pd(_mm256_mul_pd(half, _mm256_mul_pd(z, z)),
                                      _mm256_set1_pd(t[j].inv_variance));
      lmax = _mm256_max_pd(lmax, _mm256_sub_pd(_mm256_set1_pd(t[j].log_scale), q));
    }
    __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd(), s2 = _mm256_setzero_pd();
    for (std::size_t j = 0; j < nt; ++j) {
      const __m256d iv = _mm256_set1_pd(t[j].inv_variance);
      const __m256d z = _mm256_sub_pd(xv, _mm256_set1_pd(t[j].mean));
      const __m256d q = _mm256_mul_pd(_mm256_mul_pd(half, _mm256_mul_pd(z, z)), iv);
      const __m256d e =
          exp_pd(_mm256_sub_pd(_mm256_sub_pd(_mm256_set1_pd(t[j].log_scale), q), lmax));
      const __m256d g = _mm256_sub_pd(_mm256_setzero_pd(), _mm256_mul_pd(z, iv));
      s0 = _mm256_add_pd(s0, e);
      s1 = _mm256_add_pd(s1, _mm256_mul_pd(e, g));
      s2 = _mm256_add_pd(s2, _mm256_mul_pd(e, _mm256_sub_pd(_mm256_mul_pd(g, g), iv)));
    }
    const __m256d r1 = _mm256_div_pd(s1, s0);
    const __m256d r2 = _mm256_sub_pd(_mm256_div_pd(s2, s0), _mm256_mul_pd(r1, r1));
    alignas(32) double lm[4], s0a[4];
    _mm256_store_pd(lm, lmax);
    _mm256_store_pd(s0a, s0);
    for (int l = 0; l < 4; ++l) log_f[i + l] = lm[l] + std::log(s0a[l]);
    _mm256_storeu_pd(dlog + i, r1);
    _mm256_storeu_pd(d2log + i, r2);
  }
  if (i < n)
    scalar::table().mixture_log_density(t, nt, x + i, log_f + i, dlog + i, d2log + i, n - i);
}

const KernelTable kTable{dot, exp_quadratic, hermite_series, mixture_log_density};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace lsi::simd::avx2

#endif
