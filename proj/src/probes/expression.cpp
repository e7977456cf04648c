#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lsi/probe.hpp"
#include "lsi/simd.hpp"

namespace lsi {

namespace {

double horner(const std::vector<double>& c, double y) {
  double s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * y + *it;
  return s;
}

double horner_derivative(const std::vector<double>& c, double y) {
  double s = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) s = s * y + double(k) * c[k];
  return s;
}

double bump_log(double y) { return -1.0 / (y * (1.0 - y)); }

double bump_dlog(double y) {
  const double t = y * (1.0 - y);
  return (1.0 - 2.0 * y) / (t * t);
}

double alg_log(double y, double dim, double ex) {
  const double y2 = y * y;
  return -0.25 * dim * std::log1p(y2) - 0.5 * ex * std::log(std::log(2.0 + y2));
}

double alg_dlog(double y, double dim, double ex) {
  const double y2 = y * y;
  return -0.5 * dim * y / (1.0 + y2) - ex * y / ((2.0 + y2) * std::log(2.0 + y2));
}

std::vector<double> real_roots(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  const int deg = int(c.size()) - 1;
  std::vector<double> out;
  if (deg < 1) return out;
  if (deg == 1) {
    out.push_back(-c[0] / c[1]);
    return out;
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  for (int i = 0; i < deg; ++i) {
    const auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) > 1e-7 * (1.0 + std::abs(z.real()))) continue;
    double y = z.real();
    for (int it = 0; it < 4; ++it) {
      const double d = horner_derivative(c, y);
      if (d == 0.0) break;
      y -= horner(c, y) / d;
    }
    out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Expression Expression::constant(double c) {
  Expression e;
  if (c == 0.0) return zero();
  e.amplitude = c;
  return e;
}

Expression Expression::exp_quadratic(double q0, double q1, double q2, double amplitude) {
  Expression e;
  e.q0 = q0;
  e.q1 = q1;
  e.q2 = q2;
  e.amplitude = amplitude;
  return e;
}

Expression Expression::polynomial(std::vector<double> coeffs) {
  Expression e;
  e.base = BaseKind::polynomial;
  e.poly = std::move(coeffs);
  return e;
}

Expression Expression::bump(double amplitude) {
  Expression e;
  e.base = BaseKind::bump;
  e.amplitude = amplitude;
  return e;
}

Expression Expression::algebraic_log(double dim, double exponent) {
  Expression e;
  e.base = BaseKind::algebraic_log;
  e.alg_dim = dim;
  e.alg_exponent = exponent;
  return e;
}

Expression Expression::zero() {
  Expression e;
  e.base = BaseKind::zero;
  e.amplitude = 0.0;
  return e;
}

double Expression::value(double x) const {
  const double q = q0 + x * (q1 + q2 * x);
  const double y = scale * x + shift;
  switch (base) {
    case BaseKind::zero:
      return 0.0;
    case BaseKind::one:
      return amplitude * std::exp(q);
    case BaseKind::polynomial:
      return amplitude * std::exp(q) * horner(poly, y);
    case BaseKind::bump:
      if (!(y > 0.0 && y < 1.0)) return 0.0;
      return amplitude * std::exp(q + bump_log(y));
    case BaseKind::algebraic_log:
      return amplitude * std::exp(q + alg_log(y, alg_dim, alg_exponent));
  }
  return 0.0;
}

double Expression::derivative(double x) const {
  const double dq = q1 + 2.0 * q2 * x;
  const double y = scale * x + shift;
  switch (base) {
    case BaseKind::zero:
      return 0.0;
    case BaseKind::one:
      return value(x) * dq;
    case BaseKind::polynomial: {
      const double e = amplitude * std::exp(q0 + x * (q1 + q2 * x));
      return e * (dq * horner(poly, y) + scale * horner_derivative(poly, y));
    }
    case BaseKind::bump:
      if (!(y > 0.0 && y < 1.0)) return 0.0;
      return value(x) * (dq + scale * bump_dlog(y));
    case BaseKind::algebraic_log:
      return value(x) * (dq + scale * alg_dlog(y, alg_dim, alg_exponent));
  }
  return 0.0;
}

double Expression::log_abs(double x) const {
  const double q = q0 + x * (q1 + q2 * x) + std::log(std::abs(amplitude));
  const double y = scale * x + shift;
  switch (base) {
    case BaseKind::zero:
      return -HUGE_VAL;
    case BaseKind::one:
      return q;
    case BaseKind::polynomial:
      return q + std::log(std::abs(horner(poly, y)));
    case BaseKind::bump:
      if (!(y > 0.0 && y < 1.0)) return -HUGE_VAL;
      return q + bump_log(y);
    case BaseKind::algebraic_log:
      return q + alg_log(y, alg_dim, alg_exponent);
  }
  return -HUGE_VAL;
}

void Expression::evaluate(std::span<const double> x, std::span<double> v,
                          std::span<double> dv) const {
  if (base == BaseKind::one) {
    simd::exp_quadratic(q0, q1, q2, x, v);
    for (std::size_t i = 0; i < x.size(); ++i) {
      v[i] *= amplitude;
      dv[i] = v[i] * (q1 + 2.0 * q2 * x[i]);
    }
    return;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    v[i] = value(x[i]);
    dv[i] = derivative(x[i]);
  }
}

Expression Expression::shifted(double k) const {
  Expression e = *this;
  e.q0 = q0 + q1 * k + q2 * k * k;
  e.q1 = q1 + 2.0 * q2 * k;
  e.shift = shift + scale * k;
  return e;
}

Expression Expression::rescaled(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("Expression::rescaled: scale must be positive");
  Expression e = *this;
  e.q1 = q1 / s;
  e.q2 = q2 / (s * s);
  e.scale = scale / s;
  return e;
}

Expression Expression::reflected() const {
  Expression e = *this;
  e.q1 = -q1;
  e.scale = -scale;
  return e;
}

Expression Expression::times_exp(double c0, double c1, double c2) const {
  Expression e = *this;
  e.q0 += c0;
  e.q1 += c1;
  e.q2 += c2;
  return e;
}

Expression Expression::times(double c) const {
  if (c == 0.0) return zero();
  Expression e = *this;
  e.amplitude *= c;
  return e;
}

bool Expression::is_zero() const {
  if (base == BaseKind::zero || amplitude == 0.0) return true;
  if (base == BaseKind::polynomial)
    return std::all_of(poly.begin(), poly.end(), [](double c) { return c == 0.0; });
  return false;
}

bool Expression::is_exp_quadratic() const { return base == BaseKind::one && amplitude != 0.0; }

int Expression::polynomial_degree() const {
  if (base != BaseKind::polynomial) return 0;
  int deg = int(poly.size()) - 1;
  while (deg > 0 && poly[deg] == 0.0) --deg;
  return std::max(deg, 0);
}

std::vector<double> Expression::zeros_in(double lo, double hi) const {
  std::vector<double> out;
  if (base != BaseKind::polynomial || scale == 0.0) return out;
  for (double y : real_roots(poly)) {
    const double x = (y - shift) / scale;
    if (x > lo && x < hi) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lsi
