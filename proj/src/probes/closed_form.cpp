#include <cmath>
#include <numbers>
#include <optional>

#include "lsi/probe.hpp"
#include "lsi/quad.hpp"

namespace lsi {

namespace {

struct FactorMoments {
  double n = 0.0, m1 = 0.0, m2 = 0.0, fisher = 0.0;
  std::optional<double> entropy;
};

std::optional<FactorMoments> exp_quadratic_factor(const Profile& f, Mode mode) {
  FactorMoments out;
  out.entropy = 0.0;
  const double wlog = mode == Mode::gaussian ? -0.5 * std::log(2.0 * std::numbers::pi) : 0.0;
  const double wc = mode == Mode::gaussian ? 0.5 : 0.0;
  for (const auto& p : f.pieces()) {
    const Expression& e = p.expr;
    if (e.is_zero()) continue;
    if (!e.is_exp_quadratic()) return std::nullopt;
    const double la = 2.0 * (std::log(std::abs(e.amplitude)) + e.q0);
    const double A = la + wlog, B = 2.0 * e.q1, C = wc - 2.0 * e.q2;
    if (!(C > 0.0)) return std::nullopt;
    const auto m = quad::exp_quadratic_moments(A, B, C, p.lo, p.hi);
    out.n += m.m0;
    out.m1 += m.m1;
    out.m2 += m.m2;
    out.fisher += e.q1 * e.q1 * m.m0 + 4.0 * e.q1 * e.q2 * m.m1 + 4.0 * e.q2 * e.q2 * m.m2;
    *out.entropy += la * m.m0 + 2.0 * e.q1 * m.m1 + 2.0 * e.q2 * m.m2;
  }
  return out;
}

double gaussian_moment(int m) {
  if (m % 2) return 0.0;
  double r = 1.0;
  for (int k = m - 1; k > 0; k -= 2) r *= k;
  return r;
}

// Coefficients in x of p(s x + t).
std::vector<double> compose_affine(const std::vector<double>& p, double s, double t) {
  std::vector<double> out(p.size(), 0.0);
  // Horner in polynomial arithmetic.
  std::vector<double> acc;
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    std::vector<double> next(acc.size() + 1, 0.0);
    for (std::size_t k = 0; k < acc.size(); ++k) {
      next[k] += acc[k] * t;
      next[k + 1] += acc[k] * s;
    }
    next[0] += *it;
    acc = std::move(next);
  }
  for (std::size_t k = 0; k < acc.size() && k < out.size(); ++k) out[k] = acc[k];
  return out;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

double gaussian_expectation(const std::vector<double>& p, int shift) {
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) s += p[k] * gaussian_moment(int(k) + shift);
  return s;
}

std::optional<FactorMoments> polynomial_factor(const Profile& f, Mode mode) {
  if (mode != Mode::gaussian || f.pieces().size() != 1) return std::nullopt;
  const Expression& e = f.pieces()[0].expr;
  if (e.base != BaseKind::polynomial || e.q0 != 0.0 || e.q1 != 0.0 || e.q2 != 0.0)
    return std::nullopt;
  const auto p = compose_affine(e.poly, e.scale, e.shift);
  std::vector<double> dp;
  for (std::size_t k = 1; k < p.size(); ++k) dp.push_back(double(k) * p[k]);
  const auto p2 = poly_mul(p, p);
  const double a2 = e.amplitude * e.amplitude;
  FactorMoments out;
  out.n = a2 * gaussian_expectation(p2, 0);
  out.m1 = a2 * gaussian_expectation(p2, 1);
  out.m2 = a2 * gaussian_expectation(p2, 2);
  out.fisher = dp.empty() ? 0.0 : a2 * gaussian_expectation(poly_mul(dp, dp), 0);
  return out;
}

}  // namespace

ExactTable closed_form_table(const ProbeFunction& probe) {
  ExactTable t;
  if (probe.structure() != Structure::product) return t;
  std::vector<FactorMoments> fm;
  for (const auto& f : probe.factors()) {
    auto m = exp_quadratic_factor(f, probe.mode());
    if (!m) m = polynomial_factor(f, probe.mode());
    if (!m) return t;
    fm.push_back(*m);
  }
  const int d = probe.dimension();
  auto others = [&](int j) {
    double p = 1.0;
    for (int i = 0; i < d; ++i)
      if (i != j) p *= fm[i].n;
    return p;
  };
  double n = 1.0, m2 = 0.0, fisher = 0.0, ent = 0.0;
  bool has_entropy = true;
  t.first_moment.assign(d, 0.0);
  for (int j = 0; j < d; ++j) {
    n *= fm[j].n;
    const double o = others(j);
    t.first_moment[j] = fm[j].m1 * o;
    m2 += fm[j].m2 * o;
    fisher += fm[j].fisher * o;
    if (fm[j].entropy)
      ent += *fm[j].entropy * o;
    else
      has_entropy = false;
  }
  t.l2_norm_sq = n;
  t.second_moment = m2;
  t.fisher = fisher;
  if (has_entropy) t.raw_entropy = ent;
  return t;
}

}  // namespace lsi
