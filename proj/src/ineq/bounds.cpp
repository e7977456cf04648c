#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lsi/ineq.hpp"

namespace lsi::ineq {

std::string_view status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::passed: return "pass";
    case CheckStatus::failed: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "?";
}

std::string_view form_name(LsiForm f) {
  switch (f) {
    case LsiForm::g: return "g";
    case LsiForm::e: return "e";
    case LsiForm::e_lambda: return "e_lambda";
    case LsiForm::s: return "s";
  }
  return "?";
}

double theta(int d, double p) { return d * (p - 2.0) / (2.0 * p); }

void BoundParams::validate(int d) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("BoundParams: lambda must be > 0");
  if (!(c_p > 0.0 && c_p <= 1.0)) throw std::invalid_argument("BoundParams: C_P must lie in (0,1]");
  if (!(t >= 0.0)) throw std::invalid_argument("BoundParams: t must be >= 0");
  if (c_gns && !(*c_gns > 0.0)) throw std::invalid_argument("BoundParams: C_GNS must be > 0");
  if (!(p > 0.0)) throw std::invalid_argument("BoundParams: p must be > 0");
  if (p > 2.0 && d >= 3 && p > 2.0 * d / (d - 2.0) + 1e-12)
    throw std::invalid_argument("BoundParams: p exceeds the Sobolev exponent");
  if (!(tolerance_floor >= 0.0) || !(error_factor >= 0.0))
    throw std::invalid_argument("BoundParams: tolerances must be nonnegative");
}

double phi(double t, int d) {
  const double y = 2.0 * t / d;
  // expm1(y) - y loses everything for small y; use the series there.
  if (std::abs(y) < 1e-3) {
    const double y2 = y * y;
    return 0.25 * d * y2 * (0.5 + y / 6.0 + y2 / 24.0 + y2 * y / 120.0);
  }
  return 0.25 * d * (std::expm1(y) - y);
}

double phi_second(double t, int d) { return std::exp(2.0 * t / d) / d; }

double psi(double s, int d) {
  if (s < 0.0) throw std::invalid_argument("psi: s must be >= 0");
  const double y = 4.0 * s / d;
  if (y < 1e-3) {
    // s - (d/4) log1p(y) = (d/4)(y^2/2 - y^3/3 + y^4/4 - ...)
    return 0.25 * d * y * y * (0.5 - y / 3.0 + y * y / 4.0 - y * y * y / 5.0);
  }
  return s - 0.25 * d * std::log1p(y);
}

double cor_stab_rhs(double i, int d) {
  if (i < 0.0) throw std::invalid_argument("cor_stab_rhs: i must be >= 0");
  return 8.0 * std::sqrt(double(d)) * i * i / std::pow(d + 8.0 * i, 1.5);
}

double stab0_inverted_rhs(double i, int d) {
  if (i < 0.0) throw std::invalid_argument("stab0_inverted_rhs: i must be >= 0");
  // (sqrt(d(d+8i)) - d)^2 / (8d), written without cancellation.
  const double r = 8.0 * i / (std::sqrt(d * (d + 8.0 * i)) + d);
  return d * r * r / 8.0;
}

double poincare_evolution(double c_p, double t) {
  if (!(c_p > 0.0 && c_p <= 1.0)) throw std::invalid_argument("poincare_evolution: C_P must lie in (0,1]");
  if (!(t >= 0.0)) throw std::invalid_argument("poincare_evolution: t must be >= 0");
  return c_p / (c_p + (1.0 - c_p) * std::exp(-2.0 * t));
}

double fil_factor(double c_p) {
  if (!(c_p > 0.0 && c_p <= 1.0)) throw std::invalid_argument("fil_factor: C_P must lie in (0,1]");
  const double h = 1.0 - c_p;
  if (h < 1e-4) {
    // Expansion around C_P = 1: 1/2 - h/6 - h^2/12 - h^3/20
    return 0.5 - h / 6.0 - h * h / 12.0 - h * h * h / 20.0;
  }
  return (c_p * c_p - c_p - c_p * std::log(c_p)) / (h * h);
}

std::optional<double> gns_constant(int d, double p) {
  if (d == 1 && p > 2.0) {
    // Optimiser sech(x)^k with k = 2/(p-2); int sech^a = sqrt(pi) Gamma(a/2) / Gamma((a+1)/2).
    auto j = [](double a) {
      return std::exp(0.5 * std::log(std::numbers::pi) + std::lgamma(0.5 * a) - std::lgamma(0.5 * (a + 1.0)));
    };
    const double k = 2.0 / (p - 2.0);
    const double l2 = j(2.0 * k);
    const double grad = k * k * (j(2.0 * k) - j(2.0 * k + 2.0));
    const double lp = j(p * k);
    const double th = theta(1, p);
    return std::pow(grad, 0.5 * th) * std::pow(l2, 0.5 * (1.0 - th)) / std::pow(lp, 1.0 / p);
  }
  if (d >= 3 && std::abs(p - 2.0 * d / (d - 2.0)) < 1e-12) {
    const double area = sphere_area(d + 1);
    return std::sqrt(0.25 * d * (d - 2.0)) * std::pow(area, 1.0 / d);
  }
  return std::nullopt;
}

double prop1_bound(double g, double p, double c_gns) {
  return 4.0 * std::pow(g / c_gns, p) / ((p - 2.0) * std::numbers::e);
}

double prop1_naive_bound(double g, double p, double c_gns) {
  return 2.0 * std::pow(g / c_gns, p) / ((p - 1.0) * std::numbers::e);
}

double optimal_lambda(const FunctionalReport& r) {
  if (r.mode != Mode::euclidean) throw std::invalid_argument("optimal_lambda: Euclidean report required");
  if (r.second_moment.divergent || !(r.second_moment.value > 0.0))
    throw std::invalid_argument("optimal_lambda: second moment is not finite");
  return r.dimension * r.l2_norm_sq.value / r.second_moment.value;
}

double optimal_lambda(const ProbeFunction& u) {
  return optimal_lambda(report(u, Mode::euclidean));
}

double entropy_optimal_lambda(const FunctionalReport& r) {
  if (r.mode != Mode::euclidean) throw std::invalid_argument("entropy_optimal_lambda: Euclidean report required");
  if (r.entropy.divergent) throw std::invalid_argument("entropy_optimal_lambda: entropy diverges");
  const double e = r.entropy.value / r.l2_norm_sq.value;
  return std::exp(-1.0 - 2.0 * e / r.dimension) / (2.0 * std::numbers::pi);
}

}  // namespace lsi::ineq
