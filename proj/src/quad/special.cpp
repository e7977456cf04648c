#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lsi/quad.hpp"

namespace lsi::quad {

namespace {
constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
}

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) {
  if (std::isnan(x)) throw std::invalid_argument("normal_cdf: NaN argument");
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_sf(double x) {
  if (std::isnan(x)) throw std::invalid_argument("normal_sf: NaN argument");
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw std::invalid_argument("normal_quantile: p outside [0,1]");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double mills_ratio(double x) {
  if (std::isinf(x)) return x > 0 ? 0.0 : std::numeric_limits<double>::infinity();
  if (x < 4.0) return normal_sf(x) / normal_pdf(x);
  // Lentz evaluation of R(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...)))).
  const double tiny = 1e-300;
  double f = x, c = x, d = 0.0;
  for (int k = 1; k < 500; ++k) {
    d = x + k * d;
    if (d == 0.0) d = tiny;
    c = x + k / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

GaussMoments exp_quadratic_moments(double A, double B, double C, double lo, double hi) {
  if (!(C > 0.0)) throw std::invalid_argument("exp_quadratic_moments: C must be positive");
  if (!(lo < hi)) return {};
  const double mu = B / (2.0 * C);
  const double sigma = 1.0 / std::sqrt(2.0 * C);
  auto logh = [&](double x) { return A + x * (B - C * x); };
  const double hlo = std::isinf(lo) ? 0.0 : std::exp(logh(lo));
  const double hhi = std::isinf(hi) ? 0.0 : std::exp(logh(hi));
  const double alpha = (lo - mu) / sigma;
  const double beta = (hi - mu) / sigma;
  double i0;
  if (alpha >= 0.0) {
    i0 = sigma * (hlo * mills_ratio(alpha) - (std::isinf(hi) ? 0.0 : hhi * mills_ratio(beta)));
  } else if (beta <= 0.0) {
    i0 = sigma * (hhi * mills_ratio(-beta) - (std::isinf(lo) ? 0.0 : hlo * mills_ratio(-alpha)));
  } else {
    const double peak = std::exp(A + B * B / (4.0 * C)) * sigma * std::sqrt(2.0 * std::numbers::pi);
    const double left = std::isinf(lo) ? 0.0 : normal_sf(-alpha);
    const double right = std::isinf(hi) ? 0.0 : normal_sf(beta);
    i0 = peak * ((1.0 - left) - right);
  }
  const double s2 = sigma * sigma;
  const double elo = std::isinf(lo) ? 0.0 : (lo - mu) * hlo;
  const double ehi = std::isinf(hi) ? 0.0 : (hi - mu) * hhi;
  const double j1 = s2 * (hlo - hhi);
  const double j2 = s2 * (i0 + elo - ehi);
  GaussMoments m;
  m.m0 = i0;
  m.m1 = mu * i0 + j1;
  m.m2 = j2 + 2.0 * mu * j1 + mu * mu * i0;
  m.mu = mu;
  m.c1 = j1;
  m.c2 = j2;
  return m;
}

}  // namespace lsi::quad
