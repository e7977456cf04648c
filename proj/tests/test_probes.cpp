#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>
#include <numbers>

#include "gen.hpp"
#include "lsi/errors.hpp"
#include "lsi/probe.hpp"
#include "lsi/quad.hpp"

using namespace lsi;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Expression random_expression(testgen::Gen& g) {
  switch (g.integer(0, 2)) {
    case 0: return Expression::exp_quadratic(g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-0.4, 0.1), g.uniform(0.5, 2));
    case 1: return Expression::polynomial(g.vec(std::size_t(g.integer(1, 5)), -1, 1));
    default: return Expression::polynomial(g.vec(3, -1, 1)).times_exp(0.1, g.uniform(-0.5, 0.5), -0.1);
  }
}
}  // namespace

TEST_CASE("expression derivatives match centred differences (property)") {
  testgen::Gen g(31);
  for (int i = 0; i < 100; ++i) {
    const Expression e = random_expression(g);
    const double x = g.uniform(-3, 3), h = 1e-5;
    const double fd = (e.value(x + h) - e.value(x - h)) / (2 * h);
    CHECK(std::abs(e.derivative(x) - fd) <= 1e-6 * (1.0 + std::abs(fd)));
  }
}

TEST_CASE("expression transforms agree with pointwise definitions (property)") {
  testgen::Gen g(32);
  for (int i = 0; i < 100; ++i) {
    const Expression e = random_expression(g);
    const double x = g.uniform(-2, 2), k = g.uniform(-1, 1), s = g.uniform(0.3, 3);
    const double tol = 1e-12 * (1.0 + std::abs(e.value(x + k)) + std::abs(e.value(x / s)));
    CHECK(std::abs(e.shifted(k).value(x) - e.value(x + k)) <= tol);
    CHECK(std::abs(e.rescaled(s).value(x) - e.value(x / s)) <= tol);
    CHECK(std::abs(e.reflected().value(x) - e.value(-x)) <= 1e-12 * (1.0 + std::abs(e.value(-x))));
    CHECK(std::abs(e.times_exp(0.2, -0.3, 0.05).value(x) - std::exp(0.2 - 0.3 * x + 0.05 * x * x) * e.value(x)) <=
          1e-12 * (1.0 + std::abs(e.value(x))) * std::exp(0.2 - 0.3 * x + 0.05 * x * x));
    if (e.value(x) != 0.0) CHECK(e.log_abs(x) == doctest::Approx(std::log(std::abs(e.value(x)))).epsilon(1e-12));
  }
}

TEST_CASE("polynomial zeros are located inside the interval") {
  const Expression e = Expression::polynomial({-1.0, 0.0, 1.0});  // x^2 - 1
  const auto z = e.zeros_in(-5, 5);
  REQUIRE(z.size() == 2);
  CHECK(z[0] == doctest::Approx(-1.0));
  CHECK(z[1] == doctest::Approx(1.0));
  CHECK(e.zeros_in(0.0, 0.5).empty());
}

TEST_CASE("bump base is smooth and compactly supported") {
  const Expression b = Expression::bump();
  CHECK(b.value(-0.1) == 0.0);
  CHECK(b.value(1.1) == 0.0);
  CHECK(b.value(0.5) == doctest::Approx(std::exp(-4.0)));
  CHECK(b.value(1e-3) < 1e-300);
}

TEST_CASE("prop42 probes are even, continuous and carry their breakpoints") {
  for (double a : {1.0, 2.0})
    for (int n : {10, 20, 40, 80}) {
      const ProbeFunction v = make_prop42(a, n);
      CHECK(v.even());
      CHECK(v.mode() == Mode::gaussian);
      CHECK(v.factors()[0].continuity_defect() < 1e-12);
      const auto bp = v.breakpoints();
      REQUIRE(bp.size() == 4);
      CHECK(bp[3] == doctest::Approx(n / 2.0));
      CHECK(bp[2] == doctest::Approx(n / 2.0 - 1.0 / (2.0 * n)));
      testgen::Gen g(33 + n);
      for (int i = 0; i < 20; ++i) {
        const double x = g.uniform(0, n);
        CHECK(v.value1(x) == v.value1(-x));
      }
      // cutoff endpoint values: 1 and sqrt(eps) before normalization
      const double eps = a / (2.0 * n * n);
      CHECK(v.value1(bp[3]) / v.value1(0.0) == doctest::Approx(std::sqrt(eps)).epsilon(1e-12));
    }
}

TEST_CASE("prop42 exact table normalizes the probe") {
  const ProbeFunction v = make_prop42(1.0, 20);
  REQUIRE(v.exact().l2_norm_sq);
  CHECK(*v.exact().l2_norm_sq == doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE(v.exact().second_moment);
  CHECK(*v.exact().second_moment == doctest::Approx(1.9975062344139651).epsilon(1e-12));
}

TEST_CASE("optimizer closed forms") {
  for (double b : {0.0, 0.5, 1.0, -0.7}) {
    const double bb[] = {b};
    const ProbeFunction v = make_gaussian_optimizer(bb);
    const ExactTable& t = v.exact();
    REQUIRE(t.l2_norm_sq);
    CHECK(*t.l2_norm_sq == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(*t.fisher == doctest::Approx(b * b).epsilon(1e-14));
    CHECK(*t.raw_entropy == doctest::Approx(2 * b * b).epsilon(1e-14));
    CHECK(*t.second_moment == doctest::Approx(1.0 + 4 * b * b).epsilon(1e-13));
  }
}

TEST_CASE("families reject invalid parameters") {
  CHECK_THROWS_AS(make_prop42(0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(make_prop42(1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_example2(2.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_constant_one(0), std::invalid_argument);
  CHECK_THROWS_AS(make_euclid_gaussian(-1.0, std::vector<double>{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_hermite(-1, 1), std::invalid_argument);
}

TEST_CASE("algebraic tails are rejected against the Gaussian measure") {
  const Profile f({{0.0, kInf, Expression::algebraic_log(1, 1.5)}});
  CHECK_THROWS_AS(ProbeFunction(Mode::gaussian, 1, Structure::radial, {f}), TailViolation);
  CHECK_NOTHROW(make_example2(1.5, 1));
}

TEST_CASE("specs rebuild the same probe") {
  for (const auto& p : {make_prop42(2.0, 20), make_tangent(0.1, 2), make_hermite(2, 1), make_constant_one(3)}) {
    const ProbeFunction q = make_probe(p.spec());
    CHECK(q.label() == p.label());
    const double x[] = {0.3, -0.2, 0.1};
    std::span<const double> xs(x, std::size_t(p.dimension()));
    CHECK(q.value(xs) == p.value(xs));
  }
  CHECK(family_from_name("prop42") == Family::prop42);
  CHECK_FALSE(family_from_name("nonsense"));
}

TEST_CASE("example1 splits the bump into n translated copies") {
  const ProbeFunction bump = make_default_bump();
  const ProbeFunction u4 = make_example1(bump, 4);
  for (int k = 0; k < 4; ++k)
    CHECK(u4.value1(0.5 - k) == doctest::Approx(bump.value1(0.5) / 2.0).epsilon(1e-14));
  CHECK(u4.value1(1.5) == 0.0);
}

TEST_CASE("dilation preserves the L2 norm pointwise scaling") {
  const ProbeFunction u = make_euclid_gaussian(1.0, std::vector<double>{0.0});
  const ProbeFunction w = dilate(u, 2.0);
  CHECK(w.value1(0.4) == doctest::Approx(std::sqrt(2.0) * u.value1(0.8)).epsilon(1e-14));
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4 * std::numbers::pi));
}
