#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <limits>
#include <numbers>
#include <set>

#include "gen.hpp"
#include "lsi/ineq.hpp"

using namespace lsi;
using namespace lsi::ineq;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// v = 1 + eps x + eta h_2 with unit second moment after normalization.
ProbeFunction polynomial_probe(double eps) {
  const double eta = (-2.0 * std::sqrt(2.0) + std::sqrt(8.0 - 32.0 * eps * eps)) / 8.0;
  const double c = eta / std::sqrt(2.0);
  const double norm = std::sqrt(1.0 + eps * eps + eta * eta);
  Expression e = Expression::polynomial({1.0 - c, eps, c}).times(1.0 / norm);
  ProbeSpec spec;
  spec.family = Family::custom;
  return ProbeFunction(Mode::gaussian, 1, Structure::product, {Profile({{-kInf, kInf, e}})}, spec, "poly");
}

}  // namespace

TEST_CASE("scalar bound functions at pinned points") {
  CHECK(phi(0.0, 1) == 0.0);
  CHECK(phi(0.0, 3) == 0.0);
  CHECK(psi(0.0, 1) == 0.0);
  CHECK(psi(0.0, 4) == 0.0);
  CHECK(std::abs(cor_stab_rhs(1.0, 1) - 8.0 / 27.0) <= 1e-12);
  CHECK(fil_factor(1.0) == 0.5);
  CHECK(poincare_evolution(1.0, 3.0) == 1.0);
  CHECK(poincare_evolution(0.5, 0.0) == doctest::Approx(0.5));
  CHECK(poincare_evolution(0.5, 40.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(theta(1, 4.0) == doctest::Approx(0.25));
}

TEST_CASE("phi is convex with phi'' = exp(2t/d)/d >= 1/d") {
  testgen::Gen g(51);
  for (int i = 0; i < 60; ++i) {
    const int d = g.integer(1, 6);
    const double t = g.uniform(0.0, 3.0), h = 1e-3;
    const double fd = (phi(t + h, d) - 2 * phi(t, d) + phi(t - h, d)) / (h * h);
    CHECK(fd == doctest::Approx(phi_second(t, d)).epsilon(1e-5));
    CHECK(phi_second(t, d) >= 1.0 / d);
  }
}

TEST_CASE("series branches join the closed forms continuously") {
  for (int d : {1, 2, 5}) {
    const double tb = 0.5e-3 * d;  // y = 2t/d = 1e-3
    CHECK(phi(tb * (1 - 1e-9), d) == doctest::Approx(phi(tb * (1 + 1e-9), d)).epsilon(1e-8));
    const double sb = 0.25e-3 * d;  // y = 4s/d = 1e-3
    CHECK(psi(sb * (1 - 1e-9), d) == doctest::Approx(psi(sb * (1 + 1e-9), d)).epsilon(1e-8));
  }
  CHECK(fil_factor(1.0 - 1e-4 * (1 - 1e-9)) == doctest::Approx(fil_factor(1.0 - 1e-4 * (1 + 1e-9))).epsilon(1e-7));
}

TEST_CASE("psi expands as (2/d) s^2 near zero") {
  for (int d : {1, 2, 3}) {
    const double s = 1e-4;
    CHECK(psi(s, d) / (s * s) == doctest::Approx(2.0 / d).epsilon(1e-3));
  }
}

TEST_CASE("stab0 inversion agrees with the direct formula and its small-i limit") {
  for (int d : {1, 3})
    for (double i : {0.1, 1.0, 7.0}) {
      const double direct = std::pow(std::sqrt(d * (d + 8.0 * i)) - d, 2) / (8.0 * d);
      CHECK(stab0_inverted_rhs(i, d) == doctest::Approx(direct).epsilon(1e-13));
    }
  CHECK(stab0_inverted_rhs(1e-6, 2) == doctest::Approx(2e-12 / 2).epsilon(1e-5));
}

TEST_CASE("literature GNS constants") {
  REQUIRE(gns_constant(1, 4.0));
  CHECK(*gns_constant(1, 4.0) == doctest::Approx(1.1472026904398771).epsilon(1e-12));
  REQUIRE(gns_constant(3, 6.0));
  CHECK(*gns_constant(3, 6.0) == doctest::Approx(std::sqrt(0.75) * std::cbrt(2 * std::numbers::pi * std::numbers::pi)));
  CHECK_FALSE(gns_constant(2, 4.0));
}

TEST_CASE("bound parameters are validated") {
  BoundParams p;
  p.lambda = -1;
  CHECK_THROWS_AS(p.validate(1), std::invalid_argument);
  p = {};
  p.c_p = 1.5;
  CHECK_THROWS_AS(p.validate(1), std::invalid_argument);
  p = {};
  p.p = 7.0;
  CHECK_THROWS_AS(p.validate(3), std::invalid_argument);
  CHECK_THROWS_AS(psi(-1.0, 1), std::invalid_argument);
}

TEST_CASE("Gaussian form is an equality on optimizers") {
  for (double b : {0.0, 0.5, 1.0, -0.3}) {
    const double bb[] = {b};
    const auto c = check_lsi(make_gaussian_optimizer(bb), LsiForm::g);
    CHECK(c.passed());
    CHECK(std::abs(c.margin) <= c.tolerance);
  }
}

TEST_CASE("scale-invariant form: both sides scale linearly under dilation") {
  const ProbeFunction u = gauss_to_euclid(make_tangent(0.3, 1));
  const auto base = check_lsi(u, LsiForm::s);
  for (double lambda : {0.25, 4.0}) {
    const auto c = check_lsi(dilate(u, std::sqrt(lambda)), LsiForm::s);
    CHECK(c.lhs == doctest::Approx(lambda * base.lhs).epsilon(1e-8));
    CHECK(c.rhs == doctest::Approx(lambda * base.rhs).epsilon(1e-8));
    CHECK(c.margin / c.lhs == doctest::Approx(base.margin / base.lhs).epsilon(1e-7));
  }
  const auto g = check_lsi(make_euclid_gaussian(1.0, std::vector<double>{0.0}), LsiForm::s);
  CHECK(std::abs(g.margin) <= 1e-8);
}

TEST_CASE("the lambda form is tightest at the entropy-optimal lambda") {
  const ProbeFunction u = gauss_to_euclid(make_hermite(2, 1).with_label("h2"));
  const Evaluation ev(u);
  const double ls = entropy_optimal_lambda(ev.euclidean());
  BoundParams p;
  p.lambda = ls;
  const double best = check_lsi(ev, LsiForm::e_lambda, p).margin;
  const double s_margin = check_lsi(ev, LsiForm::s, p).margin;
  CHECK(best == doctest::Approx(s_margin).epsilon(1e-9));
  for (double f : {0.5, 0.9, 1.1, 2.0}) {
    p.lambda = ls * f;
    CHECK(check_lsi(ev, LsiForm::e_lambda, p).margin >= best);
  }
}

TEST_CASE("moment-gated checks skip probes with second moment above d") {
  const auto c = check_stab0(make_prop42(1.0, 10));
  CHECK(c.skipped());
  CHECK(c.note.find("exceeds d") != std::string::npos);
  CHECK(std::isnan(c.margin));
}

TEST_CASE("the unit-moment polynomial defeats cor_stab as stated but not the exact inversion") {
  const ProbeFunction v = polynomial_probe(0.1);
  const Evaluation ev(v);
  CHECK(ev.gaussian().second_moment.value == doctest::Approx(1.0).epsilon(1e-12));
  const auto cs = check_cor_stab(ev);
  CHECK(cs.failed());
  CHECK(cs.lhs == doctest::Approx(0.0002031839215673658).epsilon(1e-8));
  CHECK(cs.rhs == doctest::Approx(0.00071298355729537407).epsilon(1e-8));
  CHECK(check_stab0_inverted(ev).passed());
  CHECK(check_stab0(ev).passed());
  CHECK(check_psi(ev).passed());
}

TEST_CASE("the 2/(p-1) variant of the entropy/GNS bound fails on sqrt(gamma)") {
  const ProbeFunction u = make_euclid_gaussian(1.0, std::vector<double>{0.0});
  const auto c = check_prop1(u, 4.0);
  CHECK(c.passed());
  CHECK(c.rhs == doctest::Approx(0.48394).epsilon(1e-4));
  CHECK(c.lhs == doctest::Approx(0.87777).epsilon(1e-4));
  // 2 phi(1) and 2 sqrt(pi e / 2) / (C^4 e)
  const double naive = c.lhs * (4.0 - 2.0) / (2.0 * (4.0 - 1.0));
  CHECK(prop1_naive_bound(1.3, 4.0, 1.1) == doctest::Approx(prop1_bound(1.3, 4.0, 1.1) / 3.0));
  CHECK(naive < c.rhs);
}

TEST_CASE("standard battery") {
  const auto probes = standard_battery();
  CHECK(probes.size() >= 20);
  std::set<std::string> labels;
  for (const auto& p : probes) labels.insert(p.label());
  CHECK(labels.size() == probes.size());
  const auto rows = run_battery(probes);
  CHECK(rows.size() == probes.size() * 17);
  const auto s = summarize(rows);
  CHECK(s.ok());
  CHECK(s.passed > 12 * 20);
  for (const auto& r : rows) {
    if (r.failed()) MESSAGE(r.name << " on " << r.probe << ": margin " << r.margin << " tol " << r.tolerance);
    if (r.skipped()) CHECK_FALSE(r.note.empty());
  }
  // deterministic order: a second run reproduces the table
  const auto again = run_battery(probes);
  REQUIRE(again.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(again[i].name == rows[i].name);
    CHECK(again[i].probe == rows[i].probe);
  }
}

TEST_CASE("improved bounds pass wherever admissible") {
  const std::set<std::string> names = {"improved_gaussian", "stab0", "cor_stab", "stabE", "prop2", "cor24", "beckner_p1.5", "beckner_p1"};
  int seen = 0;
  for (const auto& r : run_battery(standard_battery())) {
    if (!names.count(r.name) || r.skipped()) continue;
    ++seen;
    CHECK(r.passed());
  }
  CHECK(seen > 50);
}

TEST_CASE("tolerance is the floor plus the scaled error estimate") {
  BoundParams p;
  p.tolerance_floor = 1e-30;
  p.error_factor = 0.0;
  for (const auto& r : run_checks(make_tangent(0.1, 1), p)) {
    if (r.skipped()) continue;
    CHECK(r.tolerance == 1e-30);
    CHECK(r.passed() == (r.margin >= -1e-30));
  }
}
