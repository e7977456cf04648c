#include <doctest.h>

#include <cfloat>
#include <cmath>
#include <stdexcept>
#include <numbers>
#include <vector>

#include "gen.hpp"
#include "lsi/simd.hpp"

using namespace lsi::simd;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b))); }

const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 17, 64, 1001};

// Direct orthonormal Hermite values h_0..h_K at x by the three-term recurrence.
std::vector<double> hermite_values(double x, std::size_t K) {
  std::vector<double> h(K + 1);
  h[0] = 1.0;
  if (K >= 1) h[1] = x;
  for (std::size_t k = 1; k < K; ++k) h[k + 1] = (x * h[k] - std::sqrt(double(k)) * h[k - 1]) / std::sqrt(k + 1.0);
  return h;
}

}  // namespace

TEST_CASE("scalar backend is always available and selectable") {
  CHECK(backend_available(Backend::scalar));
  const Backend before = active_backend();
  set_backend(Backend::scalar);
  CHECK(active_backend() == Backend::scalar);
  set_backend(before);
  CHECK(backend_name(Backend::scalar) == "scalar");
  CHECK(backend_name(Backend::avx2) == "avx2");
}

TEST_CASE("scalar dot matches a naive sum") {
  testgen::Gen g(11);
  for (std::size_t n : kLengths) {
    auto a = g.vec(n, -1, 1), b = g.vec(n, -1, 1);
    double ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) ref += a[i] * b[i];
    CHECK(std::abs(kernels(Backend::scalar).dot(a.data(), b.data(), n) - ref) <= 1e-13 * (1.0 + std::abs(ref)));
  }
}

TEST_CASE("scalar exp_quadratic matches std::exp") {
  testgen::Gen g(12);
  auto x = g.vec(257, -30, 30);
  std::vector<double> out(x.size());
  kernels(Backend::scalar).exp_quadratic(-0.3, 0.7, -0.05, x.data(), out.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(out[i] == std::exp(-0.3 + x[i] * (0.7 - 0.05 * x[i])));
}

TEST_CASE("scalar Hermite series against the direct recurrence and finite differences") {
  testgen::Gen g(13);
  const auto c = g.vec(12, -1, 1);
  for (double x : {-3.0, -0.4, 0.0, 1.3, 4.2}) {
    const auto h = hermite_values(x, c.size() - 1);
    double ref = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) ref += c[k] * h[k];
    double v, d1, d2;
    kernels(Backend::scalar).hermite_series(c.data(), c.size(), &x, &v, &d1, &d2, 1);
    CHECK(v == doctest::Approx(ref).epsilon(1e-13));
    const double e = 1e-4;
    double vp, vm, t1, t2;
    const double xp = x + e, xm = x - e;
    kernels(Backend::scalar).hermite_series(c.data(), c.size(), &xp, &vp, &t1, &t2, 1);
    kernels(Backend::scalar).hermite_series(c.data(), c.size(), &xm, &vm, &t1, &t2, 1);
    CHECK(d1 == doctest::Approx((vp - vm) / (2 * e)).epsilon(1e-6));
    CHECK(d2 == doctest::Approx((vp - 2 * v + vm) / (e * e)).epsilon(1e-4));
  }
}

TEST_CASE("scalar mixture log-density against a direct sum, far tails stay finite") {
  const MixtureTerm t[] = {{std::log(0.3) - 0.5 * std::log(2 * std::numbers::pi * 0.5), -1.0, 2.0},
                           {std::log(0.7) - 0.5 * std::log(2 * std::numbers::pi * 2.0), 2.0, 0.5}};
  auto f = [&](double x) {
    return 0.3 * std::exp(-(x + 1) * (x + 1)) / std::sqrt(std::numbers::pi) +
           0.7 * std::exp(-(x - 2) * (x - 2) / 4.0) / std::sqrt(4 * std::numbers::pi);
  };
  for (double x : {-5.0, -1.0, 0.0, 0.5, 2.0, 6.0}) {
    double l, d1, d2;
    kernels(Backend::scalar).mixture_log_density(t, 2, &x, &l, &d1, &d2, 1);
    CHECK(l == doctest::Approx(std::log(f(x))).epsilon(1e-13));
    const double e = 1e-4;
    CHECK(d1 == doctest::Approx((std::log(f(x + e)) - std::log(f(x - e))) / (2 * e)).epsilon(1e-7));
    CHECK(d2 == doctest::Approx((std::log(f(x + e)) - 2 * std::log(f(x)) + std::log(f(x - e))) / (e * e)).epsilon(1e-4));
  }
  double x = 60.0, l, d1, d2;
  kernels(Backend::scalar).mixture_log_density(t, 2, &x, &l, &d1, &d2, 1);
  CHECK(std::isfinite(l));
  CHECK(d1 == doctest::Approx(-(x - 2) / 2.0).epsilon(1e-10));
}

TEST_CASE("avx2 kernels are equivalent to the scalar kernels") {
  if (!backend_available(Backend::avx2)) {
    MESSAGE("avx2 not available on this machine");
    return;
  }
  const KernelTable& s = kernels(Backend::scalar);
  const KernelTable& v = kernels(Backend::avx2);
  testgen::Gen g(14);
  for (int rep = 0; rep < 20; ++rep) {
    for (std::size_t n : kLengths) {
      auto a = g.vec(n, -2, 2), b = g.vec(n, -2, 2);
      const double ds = s.dot(a.data(), b.data(), n), dv = v.dot(a.data(), b.data(), n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
      CHECK(std::abs(ds - dv) <= 1e-15 * (1.0 + mag));

      const double c0 = g.uniform(-2, 2), c1 = g.uniform(-3, 3), c2 = g.uniform(-1, 0.2);
      auto x = g.vec(n, -12, 12);
      std::vector<double> os(n), ov(n);
      s.exp_quadratic(c0, c1, c2, x.data(), os.data(), n);
      v.exp_quadratic(c0, c1, c2, x.data(), ov.data(), n);
      // a fused argument differs by ~|arg| ulp, which exp turns into relative error
      for (std::size_t i = 0; i < n; ++i)
        CHECK(rel(os[i], ov[i]) <= 1e-15 + 4 * DBL_EPSILON * (std::abs(c0) + std::abs(x[i]) * (std::abs(c1) + std::abs(c2 * x[i]))));

      auto coef = g.vec(std::size_t(g.integer(1, 40)), -1, 1);
      std::vector<double> vs(n), v1(n), v2(n), ws(n), w1(n), w2(n);
      s.hermite_series(coef.data(), coef.size(), x.data(), vs.data(), v1.data(), v2.data(), n);
      v.hermite_series(coef.data(), coef.size(), x.data(), ws.data(), w1.data(), w2.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto h = hermite_values(x[i], coef.size() + 1);
        double scale = 0.0;
        for (std::size_t k = 0; k < coef.size(); ++k) scale += std::abs(coef[k]) * std::abs(h[k]) * (1.0 + k);
        CHECK(std::abs(vs[i] - ws[i]) <= 1e-13 * scale + 1e-300);
        CHECK(std::abs(v1[i] - w1[i]) <= 1e-13 * scale * (1.0 + coef.size()));
        CHECK(std::abs(v2[i] - w2[i]) <= 1e-13 * scale * (1.0 + coef.size() * coef.size()));
      }

      const int nt = g.integer(1, 5);
      std::vector<MixtureTerm> terms;
      for (int j = 0; j < nt; ++j) {
        const double var = g.uniform(0.2, 3.0);
        terms.push_back({std::log(1.0 / nt) - 0.5 * std::log(2 * std::numbers::pi * var), g.uniform(-3, 3), 1.0 / var});
      }
      std::vector<double> ls(n), l1(n), l2(n), ms(n), m1(n), m2(n);
      s.mixture_log_density(terms.data(), terms.size(), x.data(), ls.data(), l1.data(), l2.data(), n);
      v.mixture_log_density(terms.data(), terms.size(), x.data(), ms.data(), m1.data(), m2.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(ls[i] - ms[i]) <= 1e-13 * (1.0 + std::abs(ls[i])));
        CHECK(std::abs(l1[i] - m1[i]) <= 1e-12 * (1.0 + std::abs(l1[i])));
        CHECK(std::abs(l2[i] - m2[i]) <= 1e-11 * (1.0 + std::abs(l2[i])));
      }
    }
  }
}

TEST_CASE("span wrappers validate lengths") {
  std::vector<double> a(3), b(4);
  CHECK_THROWS_AS(dot(a, b), std::invalid_argument);
  std::vector<double> out(2);
  CHECK_THROWS_AS(exp_quadratic(0, 0, 0, a, out), std::invalid_argument);
}
