#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lsi/probe.hpp"
#include "lsi/quad.hpp"

namespace lsi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Profile trivial_profile() { return Profile({{-kInf, kInf, Expression::constant(1.0)}}); }

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::string vec_label(std::span<const double> b) {
  std::string s = "(";
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + fmt(b[i]);
  return s + ")";
}

ProbeFunction finish(ProbeFunction p) { return p.with_exact(closed_form_table(p)); }

}  // namespace

ProbeFunction make_constant_one(int d) {
  if (d < 1) throw std::invalid_argument("make_constant_one: d must be >= 1");
  ProbeSpec spec;
  spec.family = Family::constant;
  spec.d = d;
  ProbeFunction p(Mode::gaussian, d, Structure::product, std::vector<Profile>(d, trivial_profile()),
                  spec, "constant(d=" + std::to_string(d) + ")");
  return finish(p).with_symmetry(true);
}

ProbeFunction make_gaussian_optimizer(std::span<const double> b) {
  if (b.empty()) throw std::invalid_argument("make_gaussian_optimizer: b must be non-empty");
  std::vector<Profile> f;
  for (double bj : b) {
    if (!std::isfinite(bj)) throw std::invalid_argument("make_gaussian_optimizer: b not finite");
    f.push_back(Profile({{-kInf, kInf, Expression::exp_quadratic(-bj * bj, bj, 0.0)}}));
  }
  ProbeSpec spec;
  spec.family = Family::gaussian_optimizer;
  spec.d = int(b.size());
  spec.b.assign(b.begin(), b.end());
  const bool even = std::all_of(b.begin(), b.end(), [](double x) { return x == 0.0; });
  ProbeFunction p(Mode::gaussian, int(b.size()), Structure::product, std::move(f), spec,
                  "optimizer(b=" + vec_label(b) + ")");
  return finish(p).with_symmetry(even);
}

ProbeFunction make_tangent(double eps, int d) {
  if (d < 1) throw std::invalid_argument("make_tangent: d must be >= 1");
  if (!std::isfinite(eps)) throw std::invalid_argument("make_tangent: eps must be finite");
  std::vector<Profile> f(d, trivial_profile());
  Expression e = Expression::polynomial({1.0, eps}).times(1.0 / std::sqrt(1.0 + eps * eps));
  f[0] = Profile({{-kInf, kInf, e}});
  ProbeSpec spec;
  spec.family = Family::tangent;
  spec.d = d;
  spec.eps = eps;
  ProbeFunction p(Mode::gaussian, d, Structure::product, std::move(f), spec,
                  "tangent(eps=" + fmt(eps) + ",d=" + std::to_string(d) + ")");
  return finish(p).with_symmetry(eps == 0.0);
}

ProbeFunction make_default_bump() {
  quad::QuadratureRule rule = quad::QuadratureRule::adaptive(1e-20);
  rule.relative_tolerance = 1e-15;
  auto sq = quad::integrate_interval(
      quad::batched([](double y) {
        if (!(y > 0.0 && y < 1.0)) return 0.0;
        return std::exp(-2.0 / (y * (1.0 - y)));
      }),
      0.0, 1.0, rule, 0.125);
  const double amp = 1.0 / std::sqrt(sq.value);
  Profile f({{-kInf, 0.0, Expression::zero()},
             {0.0, 1.0, Expression::bump(amp)},
             {1.0, kInf, Expression::zero()}});
  ProbeSpec spec;
  spec.family = Family::example1;
  spec.n = 1;
  return ProbeFunction(Mode::euclidean, 1, Structure::product, {f}, spec, "bump");
}

ProbeFunction make_example1(const ProbeFunction& base, int n) {
  if (n < 1) throw std::invalid_argument("make_example1: n must be >= 1");
  if (base.dimension() != 1 || base.structure() != Structure::product ||
      base.mode() != Mode::euclidean)
    throw std::invalid_argument("make_example1: base must be a one-dimensional Euclidean probe");
  std::vector<Piece> support;
  for (const auto& p : base.factors()[0].pieces()) {
    if (p.expr.is_zero()) continue;
    if (p.lo < 0.0 || p.hi > 1.0)
      throw std::invalid_argument("make_example1: base must be supported in (0,1)");
    support.push_back(p);
  }
  if (support.empty()) throw std::invalid_argument("make_example1: base is identically zero");
  const double amp = 1.0 / std::sqrt(double(n));
  std::vector<Piece> pieces;
  for (int k = n - 1; k >= 0; --k)
    for (const auto& p : support) pieces.push_back({p.lo - k, p.hi - k, p.expr.shifted(k).times(amp)});
  std::vector<Piece> full;
  double cur = -kInf;
  for (const auto& p : pieces) {
    if (p.lo > cur) full.push_back({cur, p.lo, Expression::zero()});
    full.push_back(p);
    cur = p.hi;
  }
  full.push_back({cur, kInf, Expression::zero()});
  ProbeSpec spec = base.spec();
  spec.family = Family::example1;
  spec.n = n;
  return ProbeFunction(Mode::euclidean, 1, Structure::product, {Profile(std::move(full))}, spec,
                       "example1(n=" + std::to_string(n) + ")");
}

ProbeFunction make_example2(double a_exp, int d) {
  if (!(a_exp > 1.0 && a_exp < 2.0))
    throw std::invalid_argument("make_example2: exponent must lie in (1,2)");
  if (d < 1) throw std::invalid_argument("make_example2: d must be >= 1");
  Profile f({{0.0, kInf, Expression::algebraic_log(d, a_exp)}});
  ProbeSpec spec;
  spec.family = Family::example2;
  spec.d = d;
  spec.a_exp = a_exp;
  return ProbeFunction(Mode::euclidean, d, Structure::radial, {f}, spec,
                       "example2(a=" + fmt(a_exp) + ",d=" + std::to_string(d) + ")");
}

ProbeFunction make_prop42(double a, int n) {
  if (!(a > 0.0)) throw std::invalid_argument("make_prop42: a must be > 0");
  if (n < 2) throw std::invalid_argument("make_prop42: n must be >= 2");
  const double nn = n;
  const double eps = a / (2.0 * nn * nn);
  const double r0 = nn / 2.0 - 1.0 / (2.0 * nn);
  const double r1 = nn / 2.0;
  const double k = nn * std::log(eps);
  const double tq0 = 0.5 * std::log(eps) - nn * nn / 4.0;
  std::vector<Piece> pieces{
      {-kInf, -r1, Expression::exp_quadratic(tq0, -nn / 2.0, 0.0)},
      {-r1, -r0, Expression::exp_quadratic(-k * r0, -k, 0.0)},
      {-r0, r0, Expression::constant(1.0)},
      {r0, r1, Expression::exp_quadratic(-k * r0, k, 0.0)},
      {r1, kInf, Expression::exp_quadratic(tq0, nn / 2.0, 0.0)},
  };
  ProbeSpec spec;
  spec.family = Family::prop42;
  spec.a = a;
  spec.n = n;
  ProbeFunction g(Mode::gaussian, 1, Structure::product, {Profile(pieces)}, spec);
  const double norm2 = *closed_form_table(g).l2_norm_sq;
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& p : pieces) p.expr = p.expr.times(inv);
  ProbeFunction v(Mode::gaussian, 1, Structure::product, {Profile(pieces)}, spec,
                  "prop42(a=" + fmt(a) + ",n=" + std::to_string(n) + ")");
  return finish(v).with_symmetry(true);
}

ProbeFunction make_euclid_gaussian(double lambda, std::span<const double> b) {
  if (!(lambda > 0.0)) throw std::invalid_argument("make_euclid_gaussian: lambda must be > 0");
  if (b.empty()) throw std::invalid_argument("make_euclid_gaussian: b must be non-empty");
  std::vector<Profile> f;
  const double c = -0.25 * std::log(2.0 * std::numbers::pi * lambda);
  for (double bj : b)
    f.push_back(Profile({{-kInf, kInf,
                          Expression::exp_quadratic(c - bj * bj / (4.0 * lambda),
                                                    bj / (2.0 * lambda), -1.0 / (4.0 * lambda))}}));
  ProbeSpec spec;
  spec.family = Family::euclid_gaussian;
  spec.d = int(b.size());
  spec.lambda = lambda;
  spec.b.assign(b.begin(), b.end());
  const bool even = std::all_of(b.begin(), b.end(), [](double x) { return x == 0.0; });
  ProbeFunction p(Mode::euclidean, int(b.size()), Structure::product, std::move(f), spec,
                  "euclid_gaussian(lambda=" + fmt(lambda) + ",b=" + vec_label(b) + ")");
  return finish(p).with_symmetry(even);
}

ProbeFunction make_hermite(int degree, int d) {
  if (degree < 0) throw std::invalid_argument("make_hermite: degree must be >= 0");
  if (d < 1) throw std::invalid_argument("make_hermite: d must be >= 1");
  std::vector<double> prev{1.0}, cur{1.0};
  if (degree >= 1) cur = {0.0, 1.0};
  for (int k = 1; k < degree; ++k) {
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= k * prev[i];
    prev = cur;
    cur = next;
  }
  const double norm = std::sqrt(std::tgamma(degree + 1.0));
  std::vector<Profile> f(d, trivial_profile());
  f[0] = Profile({{-kInf, kInf, Expression::polynomial(cur).times(1.0 / norm)}});
  ProbeSpec spec;
  spec.family = Family::hermite;
  spec.d = d;
  spec.degree = degree;
  ProbeFunction p(Mode::gaussian, d, Structure::product, std::move(f), spec,
                  "hermite(k=" + std::to_string(degree) + ",d=" + std::to_string(d) + ")");
  return finish(p).with_symmetry(degree % 2 == 0);
}

ProbeFunction make_probe(const ProbeSpec& s) {
  s.validate();
  switch (s.family) {
    case Family::constant:
      return make_constant_one(s.d);
    case Family::gaussian_optimizer: {
      std::vector<double> b = s.b.empty() ? std::vector<double>(s.d, 0.0) : s.b;
      return make_gaussian_optimizer(b);
    }
    case Family::tangent:
      return make_tangent(s.eps, s.d);
    case Family::example1:
      return make_example1(make_default_bump(), s.n);
    case Family::example2:
      return make_example2(s.a_exp, s.d);
    case Family::prop42:
      return make_prop42(s.a, s.n);
    case Family::euclid_gaussian: {
      std::vector<double> b = s.b.empty() ? std::vector<double>(s.d, 0.0) : s.b;
      return make_euclid_gaussian(s.lambda, b);
    }
    case Family::hermite:
      return make_hermite(s.degree, s.d);
    case Family::custom:
      break;
  }
  throw std::invalid_argument("make_probe: custom probes cannot be rebuilt from a spec");
}

ProbeFunction dilate(const ProbeFunction& u, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("dilate: scale must be positive");
  if (u.mode() != Mode::euclidean) throw std::invalid_argument("dilate: Euclidean probes only");
  std::vector<Profile> f;
  if (u.structure() == Structure::radial) {
    f.push_back(u.factors()[0].rescaled(1.0 / s).times(std::pow(s, 0.5 * u.dimension())));
  } else {
    for (const auto& p : u.factors()) f.push_back(p.rescaled(1.0 / s).times(std::sqrt(s)));
  }
  ProbeSpec spec = u.spec();
  spec.family = Family::custom;
  ProbeFunction out(Mode::euclidean, u.dimension(), u.structure(), std::move(f), spec,
                    u.label() + "*dilate(" + fmt(s) + ")");
  return finish(out).with_symmetry(u.even());
}

}  // namespace lsi
