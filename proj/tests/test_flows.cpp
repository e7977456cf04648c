#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <vector>

#include "gen.hpp"
#include "lsi/errors.hpp"
#include "lsi/flows.hpp"

using namespace lsi;
using namespace lsi::flows;

namespace {

// log(pi e / 2): the heat monitor of any single Gaussian.
const double kGaussianMonitor = std::log(std::numbers::pi * std::numbers::e / 2.0);

GaussianMixture random_mixture(testgen::Gen& g, Reference ref) {
  const int k = g.integer(1, 3);
  std::vector<Component> c;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    c.push_back({g.uniform(0.2, 1.0), g.uniform(-2.0, 2.0), g.uniform(0.3, 2.0)});
    total += c.back().weight;
  }
  double acc = 0.0;
  for (int i = 0; i + 1 < k; ++i) acc += (c[i].weight /= total);
  c.back().weight = 1.0 - acc;
  return GaussianMixture(c, ref);
}

}  // namespace

TEST_CASE("mixtures validate their weights and variances") {
  CHECK_THROWS_AS(GaussianMixture({{0.5, 0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(GaussianMixture({{1.0, 0.0, -1.0}}), std::invalid_argument);
  CHECK_NOTHROW(two_bump());
}

TEST_CASE("evolution laws of the mixture parameters") {
  const GaussianMixture m({{0.25, 1.0, 0.5}, {0.75, -2.0, 3.0}});
  const auto o = ou_evolve(m, 0.7);
  CHECK(o.components()[0].mean == doctest::Approx(std::exp(-0.7)));
  CHECK(o.components()[1].variance == doctest::Approx(1.0 + 2.0 * std::exp(-1.4)));
  const GaussianMixture h({{1.0, 0.5, 0.5}}, Reference::lebesgue);
  CHECK(heat_evolve(h, 0.3).components()[0].variance == doctest::Approx(1.1));
  CHECK(heat_evolve(h, 0.3).components()[0].mean == 0.5);
}

TEST_CASE("the standard Gaussian is a fixed point of OU") {
  for (double t : {0.0, 0.5, 3.0}) {
    const auto s = sample(standard_gaussian(), t);
    CHECK(std::abs(s.entropy) <= 1e-14);
    CHECK(std::abs(s.fisher) <= 1e-14);
    CHECK(std::abs(s.remainder) <= 1e-14);
    CHECK(std::isnan(s.monitor));
  }
}

TEST_CASE("a single Gaussian keeps a constant heat monitor") {
  for (double var : {0.3, 1.0, 4.0})
    for (double t : {0.0, 0.4, 2.0}) {
      const auto s = sample(GaussianMixture({{1.0, 0.7, var}}, Reference::lebesgue), t);
      CHECK(s.monitor == doctest::Approx(kGaussianMonitor).epsilon(1e-12));
      CHECK(std::abs(s.remainder) <= 1e-10);
    }
}

TEST_CASE("shifted Gaussians: closed-form OU functionals") {
  // rho = exp(b x - b^2/2) along OU becomes b -> b e^{-t}
  const double b = 0.8;
  const GaussianMixture m({{1.0, b, 1.0}});
  for (double t : {0.0, 0.5, 1.5}) {
    const double bt = b * std::exp(-t);
    const auto s = sample(m, t);
    CHECK(s.entropy == doctest::Approx(0.5 * bt * bt).epsilon(1e-10));
    CHECK(s.fisher == doctest::Approx(0.25 * bt * bt).epsilon(1e-10));
    CHECK(std::abs(s.remainder) <= 1e-12);
  }
}

TEST_CASE("entropy and Fisher identities along OU for the two-bump mixture") {
  const auto times = interior_times(2.0, 10);
  REQUIRE(times.size() == 10);
  CHECK(times.front() == doctest::Approx(0.05));
  CHECK(times.back() == doctest::Approx(1.95));
  for (const auto& r : entropy_identity(two_bump(), times)) {
    CHECK(r.passed);
    CHECK(r.relative_error <= 1e-4);
  }
  for (const auto& r : fisher_identity(two_bump(), times)) {
    CHECK(r.passed);
    CHECK(r.relative_error <= 1e-3);
  }
}

TEST_CASE("identities hold on random mixtures (property)") {
  testgen::Gen g(71);
  const auto times = interior_times(1.5, 4);
  for (int i = 0; i < 6; ++i) {
    const GaussianMixture m = random_mixture(g, Reference::gaussian);
    for (const auto& r : entropy_identity(m, times)) CHECK(r.relative_error <= 1e-4);
    for (const auto& r : fisher_identity(m, times))
      CHECK(std::abs(r.lhs - r.rhs) <= 1e-3 * std::abs(r.rhs) + 1e-9);
    const GaussianMixture h = random_mixture(g, Reference::lebesgue);
    for (const auto& r : monitor_identity(h, times))
      CHECK(std::abs(r.lhs - r.rhs) <= 1e-3 * std::abs(r.rhs) + 1e-9);
  }
}

TEST_CASE("OU entropy decays at least like exp(-2t)") {
  testgen::Gen g(72);
  for (int i = 0; i < 5; ++i) {
    const GaussianMixture m = random_mixture(g, Reference::gaussian);
    const double e0 = sample(m, 0.0).entropy;
    for (double t : {0.25, 1.0, 3.0}) CHECK(sample(m, t).entropy <= e0 * std::exp(-2.0 * t) * (1 + 1e-10) + 1e-14);
  }
}

TEST_CASE("heat monitor is non-increasing") {
  const auto m = two_bump(2.0, 0.5, Reference::lebesgue);
  std::vector<double> t;
  for (int i = 0; i <= 40; ++i) t.push_back(0.05 * i);
  const auto g = heat_renyi_monitor(m, t);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] <= g[i - 1] + 1e-12);
  CHECK(g.back() >= kGaussianMonitor - 1e-12);
}

TEST_CASE("mixture and Hermite representations agree") {
  const auto m = two_bump();
  const HermiteSeries h = hermite_projection(m, 64);
  CHECK(h.coefficients()[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(h.grid_minimum() > 0.0);
  for (double t : {0.3, 1.0, 2.5}) {
    const auto a = sample(m, t), b = sample(h, t);
    CHECK(b.entropy == doctest::Approx(a.entropy).epsilon(1e-7));
    CHECK(b.fisher == doctest::Approx(a.fisher).epsilon(1e-7));
    CHECK(b.remainder == doctest::Approx(a.remainder).epsilon(1e-6));
  }
}

TEST_CASE("Hermite coefficients of a shifted Gaussian are b^k / sqrt(k!)") {
  const double b = 0.6;
  const auto c = GaussianMixture({{1.0, b, 1.0}}).hermite_coefficients(10);
  double f = 1.0;
  for (int k = 0; k <= 10; ++k) {
    if (k) f *= b / std::sqrt(double(k));
    CHECK(c[k] == doctest::Approx(f).epsilon(1e-13));
  }
}

TEST_CASE("a short Hermite series evolves by damping its coefficients") {
  const HermiteSeries h({1.0, 0.5});
  const auto e = ou_evolve(h, 1.0);
  CHECK(e.coefficients()[1] == doctest::Approx(0.5 * std::exp(-1.0)));
  CHECK(e.value(0.0) == doctest::Approx(1.0));
  // rho = 1 + c x is negative somewhere; positivity is checked on the window only
  CHECK(h.grid_minimum() < 0.0);
  CHECK_THROWS_AS(sample(h, 0.0), NumericalError);
  const auto s = sample(HermiteSeries({1.0, 0.05}, 7.5), 1.0);
  CHECK(s.fisher > 0.0);
}

TEST_CASE("the deficit equals the integrated remainder") {
  const auto c = deficit_via_flow(two_bump(), 8.0);
  CHECK(c.passed());
  CHECK(c.lhs == doctest::Approx(0.391276085718).epsilon(1e-9));
  CHECK(std::abs(c.margin) <= 1e-9);
  const auto g = deficit_via_flow(standard_gaussian(), 8.0);
  CHECK(std::abs(g.lhs) <= 1e-14);
  CHECK(std::abs(g.rhs) <= 1e-14);
}

TEST_CASE("calls with the wrong reference are rejected") {
  const auto ou = two_bump();
  const auto heat = two_bump(2.0, 0.5, Reference::lebesgue);
  const double t[] = {0.5};
  CHECK_THROWS_AS(monitor_identity(ou, t), std::invalid_argument);
  CHECK_THROWS_AS(heat_renyi_monitor(ou, t), std::invalid_argument);
  CHECK_THROWS_AS(fisher_identity(heat, t), std::invalid_argument);
  CHECK_THROWS_AS(deficit_via_flow(heat, 8.0), std::invalid_argument);
  CHECK_THROWS_AS(hermite_projection(heat), std::invalid_argument);
}

TEST_CASE("traces are reproducible") {
  const auto times = interior_times(2.0, 7);
  const auto a = trace_functionals(two_bump(), times);
  const auto b = trace_functionals(two_bump(), times);
  REQUIRE(a.samples.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(a.samples[i].entropy == b.samples[i].entropy);
    CHECK(a.samples[i].remainder == b.samples[i].remainder);
  }
  CHECK(a.method == Method::mixture);
  CHECK(reference_name(a.reference) == "gaussian");
}
