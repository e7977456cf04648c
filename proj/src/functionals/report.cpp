#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lsi/detail/factor_integral.hpp"
#include "lsi/errors.hpp"
#include "lsi/functionals.hpp"

namespace lsi {

namespace {

using detail::Envelope;
using detail::Kernel;
using detail::log_sq;

const double kL2Pi = std::log(2.0 * std::numbers::pi);

Estimate from(const quad::IntegralResult& r) {
  return Estimate{r.value, r.error_estimate, r.converged, false};
}

// One coordinate factor (or the radial profile) in u-form: u = f * sqrt(w) where w is the
// exponential part of the measure. ell(x) = log |f|^2 = log u^2 + shift(x).
struct Factor {
  Profile f;      // native form
  Profile u;      // folded form
  bool gaussian;  // measure is gamma
  int radial_dim; // 0 for a product coordinate
  bool trivial;

  double shift(double x) const {
    if (!gaussian) return 0.0;
    const int dd = radial_dim > 0 ? radial_dim : 1;
    return 0.5 * x * x + 0.5 * dd * kL2Pi;
  }
  double ell(double x, double uval) const { return log_sq(uval) + shift(x); }

  bool closed_form_capable() const {
    if (radial_dim > 0) return false;
    for (const auto& p : u.pieces())
      if (!p.expr.is_zero() && !p.expr.is_exp_quadratic()) return false;
    return true;
  }
};

struct FactorIntegrals {
  Estimate n, m1, m2, fisher, s;
};

Factor make_factor(const Profile& f, bool gaussian, int radial_dim) {
  Factor c{f, gaussian ? detail::fold_half_gaussian(f, radial_dim) : f, gaussian, radial_dim,
           gaussian && radial_dim == 0 && f.is_trivial()};
  return c;
}

bool gauss_hermite_suitable(const Factor& c) {
  if (!c.gaussian || c.radial_dim > 0) return false;
  const auto& ps = c.f.pieces();
  if (ps.size() != 1 || !ps[0].expr.is_exp_quadratic()) return false;
  return std::abs(ps[0].expr.q1) <= 5.0 && ps[0].expr.q2 <= 0.05;
}

FactorIntegrals factor_gauss_hermite(const Factor& c, const ReportOptions& o) {
  const Expression& e = c.f.pieces()[0].expr;
  auto rule = quad::QuadratureRule::gauss_hermite(o.gauss_hermite_order, o.rule.tolerance);
  auto run = [&](auto&& g) {
    return from(quad::integrate_gaussian_batch(
        [&](std::span<const double> x, std::span<double> y) {
          for (std::size_t i = 0; i < x.size(); ++i) y[i] = g(x[i]);
        },
        {}, rule));
  };
  auto v = [&](double x) { return e.value(x); };
  auto lv = [&](double x) { return 2.0 * (std::log(std::abs(e.amplitude)) + e.q0 + x * (e.q1 + e.q2 * x)); };
  FactorIntegrals r;
  r.n = run([&](double x) { return v(x) * v(x); });
  r.m1 = run([&](double x) { return x * v(x) * v(x); });
  r.m2 = run([&](double x) { return x * x * v(x) * v(x); });
  r.fisher = run([&](double x) {
    const double d = e.q1 + 2.0 * e.q2 * x;
    return d * d * v(x) * v(x);
  });
  r.s = run([&](double x) { return v(x) * v(x) * lv(x); });
  return r;
}

FactorIntegrals factor_adaptive(const Factor& c, const quad::QuadratureRule& rule) {
  const Envelope env{2.0, 0.0, 0.0};
  const int rd = c.radial_dim;
  auto run = [&](Kernel k) { return from(detail::integrate_profile(c.u, k, env, rule, rd)); };
  FactorIntegrals r;
  r.n = run([](auto x, auto u, auto, auto out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = u[i] * u[i];
  });
  if (rd == 0) {
    r.m1 = run([](auto x, auto u, auto, auto out) {
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * u[i] * u[i];
    });
  }
  r.m2 = run([](auto x, auto u, auto, auto out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * x[i] * u[i] * u[i];
  });
  if (c.gaussian) {
    r.fisher = run([](auto x, auto u, auto du, auto out) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double g = du[i] + 0.5 * x[i] * u[i];
        out[i] = g * g;
      }
    });
  } else {
    r.fisher = run([](auto x, auto, auto du, auto out) {
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = du[i] * du[i];
    });
  }
  r.s = run([&c](auto x, auto u, auto, auto out) {
    for (std::size_t i = 0; i < x.size(); ++i)
      out[i] = u[i] == 0.0 ? 0.0 : u[i] * u[i] * c.ell(x[i], u[i]);
  });
  return r;
}

// Closed form of int u^2 K(c + ell) over an exp-quadratic factor; returns {abs, negative part}.
std::pair<double, double> closed_inner(const Factor& f, double c) {
  double abs_sum = 0.0, neg_sum = 0.0;
  for (const auto& p : f.u.pieces()) {
    const Expression& e = p.expr;
    if (e.is_zero()) continue;
    const double A = 2.0 * (std::log(std::abs(e.amplitude)) + e.q0);
    const double B = 2.0 * e.q1, C = -2.0 * e.q2;
    const double l0 = A + (f.gaussian ? 0.5 * kL2Pi : 0.0) + c;
    const double l1 = B;
    const double l2 = -C + (f.gaussian ? 0.5 : 0.0);
    std::vector<double> cuts{p.lo};
    if (l2 != 0.0) {
      const double disc = l1 * l1 - 4.0 * l2 * l0;
      if (disc > 0.0) {
        const double sq = std::sqrt(disc);
        const double qq = -0.5 * (l1 + (l1 >= 0 ? sq : -sq));
        const double r1 = qq / l2;
        const double r2 = qq != 0.0 ? l0 / qq : r1;
        for (double r : {std::min(r1, r2), std::max(r1, r2)})
          if (r > p.lo && r < p.hi) cuts.push_back(r);
      }
    } else if (l1 != 0.0) {
      const double r = -l0 / l1;
      if (r > p.lo && r < p.hi) cuts.push_back(r);
    }
    cuts.push_back(p.hi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const auto m = quad::exp_quadratic_moments(A, B, C, cuts[i], cuts[i + 1]);
      const double mu = m.mu;
      const double L0 = l0 + mu * (l1 + l2 * mu);
      const double L1 = l1 + 2.0 * l2 * mu;
      const double val = L0 * m.m0 + L1 * m.c1 + l2 * m.c2;
      abs_sum += std::abs(val);
      neg_sum += std::min(val, 0.0);
    }
  }
  return {abs_sum, neg_sum};
}

// Extra breakpoints where |f| = 1 for polynomial pieces of a gaussian factor.
std::vector<double> unit_crossings(const Factor& c) {
  std::vector<double> out;
  if (!c.gaussian) return out;
  for (const auto& p : c.f.pieces()) {
    const Expression& e = p.expr;
    if (e.base != BaseKind::polynomial || e.q0 != 0.0 || e.q1 != 0.0 || e.q2 != 0.0) continue;
    for (double s : {1.0, -1.0}) {
      Expression t = e;
      t.amplitude = 1.0;
      t.poly = e.poly;
      for (auto& coef : t.poly) coef *= e.amplitude;
      if (t.poly.empty()) t.poly.push_back(0.0);
      t.poly[0] -= s;
      for (double z : t.zeros_in(p.lo, p.hi)) out.push_back(z);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

enum class Part { absolute, negative };

double nested_part(const std::vector<const Factor*>& fs, std::size_t level, double c, Part part,
                   const quad::QuadratureRule& rule, double& err, bool& conv) {
  const Factor& f = *fs[level];
  const bool last = level + 1 == fs.size();
  if (last && f.closed_form_capable()) {
    auto [a, n] = closed_inner(f, c);
    return part == Part::absolute ? a : n;
  }
  quad::QuadratureRule inner = rule;
  inner.tolerance = rule.tolerance * 1e-2;
  Kernel k = [&](auto x, auto u, auto, auto out) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (u[i] == 0.0) {
        out[i] = 0.0;
        continue;
      }
      const double cc = c + f.ell(x[i], u[i]);
      double val;
      if (last) {
        val = part == Part::absolute ? std::abs(cc) : std::min(cc, 0.0);
      } else {
        double e2 = 0.0;
        bool c2 = true;
        val = nested_part(fs, level + 1, cc, part, inner, e2, c2);
      }
      out[i] = u[i] * u[i] * val;
    }
  };
  const auto extra = unit_crossings(f);
  const auto r = detail::integrate_profile(f.u, k, Envelope{2.0, 0.0, 0.0}, rule, f.radial_dim,
                                           last && c == 0.0 ? std::span<const double>(extra)
                                                            : std::span<const double>());
  err += r.error_estimate;
  conv = conv && r.converged;
  return r.value;
}

bool has_algebraic_tail(const ProbeFunction& p) {
  return p.structure() == Structure::radial &&
         p.factors()[0].tail(true).kind == TailKind::algebraic;
}

FunctionalReport algebraic_report(const ProbeFunction& probe, bool gaussian,
                                  const ReportOptions& o) {
  const int d = probe.dimension();
  const Factor c = make_factor(probe.factors()[0], gaussian, d);
  const Expression& tail = c.u.pieces().back().expr;
  const double area = sphere_area(d);
  const double amp2 = tail.amplitude * tail.amplitude;
  const double a = tail.alg_exponent;
  const bool plain = tail.q0 == 0.0 && tail.q1 == 0.0 && tail.q2 == 0.0 && tail.scale == 1.0 &&
                     tail.shift == 0.0 && tail.alg_dim == d;
  auto weight = [&](double r) { return area * std::pow(r, d - 1); };
  auto run = [&](auto&& g, quad::ScalarFunction tailfn) {
    quad::BatchFunction bf = [&](std::span<const double> x, std::span<double> y) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = c.u.value(x[i]);
        const double du = c.u.derivative(x[i]);
        y[i] = g(x[i], u, du) * weight(x[i]);
      }
    };
    auto r = quad::integrate_lebesgue(bf, c.u.breakpoints(), o.rule, o.radius_schedule, tailfn, true);
    Estimate e{r.value, r.error_estimate, r.converged, r.divergent};
    if (!r.converged && !r.divergent) e.divergent = false;
    return e;
  };
  quad::ScalarFunction ntail = nullptr, ftail = nullptr;
  if (plain && !gaussian) {
    ntail = [=](double R) { return area * amp2 * std::pow(2.0, -a) * std::pow(std::log(R), 1.0 - a) / (a - 1.0); };
    ftail = [=](double R) {
      const double lr = std::log(R);
      return area * amp2 * std::pow(2.0 * lr, -a) * 0.25 * d * d / (2.0 * R * R);
    };
  }
  FunctionalReport rep;
  rep.mode = gaussian ? Mode::gaussian : Mode::euclidean;
  rep.dimension = d;
  rep.l2_norm_sq = run([](double, double u, double) { return u * u; }, ntail);
  rep.second_moment = run([](double r, double u, double) { return r * r * u * u; }, nullptr);
  rep.fisher = c.gaussian
                   ? run([](double r, double u, double du) {
                       const double g = du + 0.5 * r * u;
                       return g * g;
                     }, nullptr)
                   : run([](double, double, double du) { return du * du; }, ftail);
  rep.raw_entropy = run([&](double r, double u, double) { return u == 0.0 ? 0.0 : u * u * c.ell(r, u); }, nullptr);
  rep.abs_entropy = run([&](double r, double u, double) { return u == 0.0 ? 0.0 : std::abs(u * u * c.ell(r, u)); }, nullptr);
  rep.entropy_below_one = run([&](double r, double u, double) { return u == 0.0 ? 0.0 : std::min(0.0, u * u * c.ell(r, u)); }, nullptr);
  rep.first_moment.assign(d, Estimate{});
  return rep;
}

void finish_report(FunctionalReport& rep) {
  const double n = rep.l2_norm_sq.value;
  const double s = rep.raw_entropy.value;
  rep.entropy = rep.raw_entropy;
  rep.entropy.value = s - n * std::log(n);
  rep.entropy.error = rep.raw_entropy.error + std::abs(std::log(n) + 1.0) * rep.l2_norm_sq.error;
  const int d = rep.dimension;
  rep.deficit.value = rep.fisher.value - 0.5 * rep.entropy.value;
  if (rep.mode == Mode::euclidean)
    rep.deficit.value -= 0.25 * d * (kL2Pi + 2.0) * n;
  rep.deficit.value /= n;
  rep.deficit.error = (rep.fisher.error + 0.5 * rep.entropy.error +
                       (0.25 * d * (kL2Pi + 2.0) + std::abs(rep.deficit.value)) * rep.l2_norm_sq.error) /
                      n;
  rep.deficit.converged = rep.fisher.converged && rep.entropy.converged && rep.l2_norm_sq.converged;
  rep.deficit.divergent = rep.fisher.divergent || rep.entropy.divergent || rep.l2_norm_sq.divergent;
}

}  // namespace

std::vector<std::string> FunctionalReport::divergent_fields() const {
  std::vector<std::string> out;
  const std::pair<const char*, const Estimate*> fields[] = {
      {"l2_norm_sq", &l2_norm_sq},     {"fisher", &fisher},
      {"entropy", &entropy},           {"raw_entropy", &raw_entropy},
      {"abs_entropy", &abs_entropy},   {"entropy_below_one", &entropy_below_one},
      {"second_moment", &second_moment}, {"deficit", &deficit}};
  for (const auto& [name, e] : fields)
    if (e->divergent) out.emplace_back(name);
  return out;
}

std::vector<std::string> FunctionalReport::unconverged_fields() const {
  std::vector<std::string> out;
  const std::pair<const char*, const Estimate*> fields[] = {
      {"l2_norm_sq", &l2_norm_sq},     {"fisher", &fisher},
      {"entropy", &entropy},           {"raw_entropy", &raw_entropy},
      {"abs_entropy", &abs_entropy},   {"entropy_below_one", &entropy_below_one},
      {"second_moment", &second_moment}};
  for (const auto& [name, e] : fields)
    if (!e->converged && !e->divergent) out.emplace_back(name);
  return out;
}

double FunctionalReport::max_error() const {
  double m = 0.0;
  for (const Estimate* e : {&l2_norm_sq, &fisher, &entropy, &raw_entropy, &abs_entropy,
                            &entropy_below_one, &second_moment, &deficit})
    m = std::max(m, e->error);
  return m;
}

FunctionalReport report(const ProbeFunction& input, Mode mode, const ReportOptions& o) {
  const ProbeFunction probe = to_mode(input, mode);
  const bool gaussian = mode == Mode::gaussian;
  const int d = probe.dimension();
  if (has_algebraic_tail(probe)) {
    FunctionalReport rep = algebraic_report(probe, gaussian, o);
    rep.nonnegative = probe.factors()[0].nonnegative();
    finish_report(rep);
    return rep;
  }

  FunctionalReport rep;
  rep.mode = mode;
  rep.dimension = d;
  std::vector<Factor> factors;
  const int rd = probe.structure() == Structure::radial ? d : 0;
  for (const auto& f : probe.factors()) factors.push_back(make_factor(f, gaussian, rd));

  std::vector<FactorIntegrals> fi;
  for (const auto& c : factors) {
    if (o.use_gauss_hermite && gauss_hermite_suitable(c))
      fi.push_back(factor_gauss_hermite(c, o));
    else
      fi.push_back(factor_adaptive(c, o.rule));
  }

  if (rd > 0) {
    rep.l2_norm_sq = fi[0].n;
    rep.second_moment = fi[0].m2;
    rep.fisher = fi[0].fisher;
    rep.raw_entropy = fi[0].s;
    rep.first_moment.assign(d, Estimate{});
  } else {
    auto others = [&](int j) {
      double p = 1.0;
      for (int i = 0; i < d; ++i)
        if (i != j) p *= fi[i].n.value;
      return p;
    };
    double n = 1.0, nerr = 0.0;
    for (int j = 0; j < d; ++j) {
      n *= fi[j].n.value;
      nerr += fi[j].n.error * others(j);
    }
    rep.l2_norm_sq = {n, nerr, true, false};
    Estimate m2{}, fis{}, s{};
    rep.first_moment.assign(d, Estimate{});
    for (int j = 0; j < d; ++j) {
      const double o_ = others(j);
      rep.first_moment[j] = {fi[j].m1.value * o_, fi[j].m1.error * o_ + std::abs(fi[j].m1.value) * nerr, fi[j].m1.converged, false};
      m2.value += fi[j].m2.value * o_;
      m2.error += fi[j].m2.error * o_;
      fis.value += fi[j].fisher.value * o_;
      fis.error += fi[j].fisher.error * o_;
      s.value += fi[j].s.value * o_;
      s.error += fi[j].s.error * o_;
      rep.l2_norm_sq.converged = rep.l2_norm_sq.converged && fi[j].n.converged;
      m2.converged = m2.converged && fi[j].m2.converged;
      fis.converged = fis.converged && fi[j].fisher.converged;
      s.converged = s.converged && fi[j].s.converged;
    }
    rep.second_moment = m2;
    rep.fisher = fis;
    rep.raw_entropy = s;
  }

  // Absolute entropy and the sub-unit part.
  std::vector<const Factor*> active;
  double trivial_mass = 1.0;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    if (factors[j].trivial)
      trivial_mass *= fi[j].n.value;
    else
      active.push_back(&factors[j]);
  }
  if (active.empty()) {
    rep.abs_entropy = {0.0, 0.0, true, false};
    rep.entropy_below_one = {0.0, 0.0, true, false};
  } else {
    std::stable_partition(active.begin(), active.end(),
                          [](const Factor* f) { return !f->closed_form_capable(); });
    for (Part part : {Part::absolute, Part::negative}) {
      double err = 0.0;
      bool conv = true;
      const double v = nested_part(active, 0, 0.0, part, o.rule, err, conv) * trivial_mass;
      Estimate e{v, err * trivial_mass + 1e-15 * std::abs(v), conv, false};
      (part == Part::absolute ? rep.abs_entropy : rep.entropy_below_one) = e;
    }
  }

  if (gaussian) {
    bool nonneg = true;
    for (const auto& f : probe.factors()) nonneg = nonneg && f.nonnegative();
    rep.nonnegative = nonneg;
    if (d == 1 && rd == 0) {
      const Factor& c = factors[0];
      Kernel k = [](auto x, auto u, auto, auto out) {
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double g = std::exp(-0.25 * kL2Pi - 0.25 * x[i] * x[i]);
          out[i] = std::abs(u[i] - g) * g;
        }
      };
      std::vector<double> extra;
      for (const auto& p : c.f.pieces()) {
        const Expression& e = p.expr;
        if (e.is_exp_quadratic()) {
          // |f| = 1 where log|amp| + q(x) = 0.
          const double l0 = std::log(std::abs(e.amplitude)) + e.q0;
          if (e.q2 == 0.0 && e.q1 != 0.0) extra.push_back(-l0 / e.q1);
          if (e.q2 != 0.0) {
            const double disc = e.q1 * e.q1 - 4.0 * e.q2 * l0;
            if (disc >= 0.0) {
              extra.push_back((-e.q1 + std::sqrt(disc)) / (2.0 * e.q2));
              extra.push_back((-e.q1 - std::sqrt(disc)) / (2.0 * e.q2));
            }
          }
        }
      }
      for (double z : unit_crossings(c)) extra.push_back(z);
      auto r = detail::integrate_profile(c.u, k, Envelope{1.0, 0.0, -0.25}, o.rule, 0, extra);
      rep.l1_deviation = from(r);
    }
  } else {
    bool nonneg = true;
    for (const auto& f : probe.factors()) nonneg = nonneg && f.nonnegative();
    rep.nonnegative = nonneg;
  }
  finish_report(rep);
  return rep;
}

double ckp_lower_bound(const FunctionalReport& r) {
  if (r.mode != Mode::gaussian) throw std::invalid_argument("ckp_lower_bound: gaussian report required");
  if (!r.l1_deviation) throw std::invalid_argument("ckp_lower_bound: report has no L1 deviation");
  if (std::abs(r.l2_norm_sq.value - 1.0) > 1e-8)
    throw std::invalid_argument("ckp_lower_bound: probe must have unit norm");
  if (!r.nonnegative) throw std::invalid_argument("ckp_lower_bound: probe must be nonnegative");
  const double l1 = r.l1_deviation->value;
  return 0.25 * l1 * l1;
}

Estimate lp_integral(const ProbeFunction& probe, double p, const quad::QuadratureRule& rule) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_integral: p must be positive");
  const bool gaussian = probe.mode() == Mode::gaussian;
  const int d = probe.dimension();
  const int rd = probe.structure() == Structure::radial ? d : 0;
  // |f|^p w = |u|^p w^{1 - p/2}
  const double wexp = gaussian ? 1.0 - 0.5 * p : 0.0;
  const int dd = rd > 0 ? rd : 1;
  Estimate total{1.0, 0.0, true, false};
  std::vector<double> vals;
  for (const auto& f : probe.factors()) {
    const Factor c = make_factor(f, gaussian, rd);
    Kernel k = [&](auto x, auto u, auto, auto out) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (u[i] == 0.0) {
          out[i] = 0.0;
          continue;
        }
        const double lw = gaussian ? -0.5 * x[i] * x[i] - 0.5 * dd * kL2Pi : 0.0;
        out[i] = std::exp(p * std::log(std::abs(u[i])) + wexp * lw);
      }
    };
    auto r = detail::integrate_profile(c.u, k, Envelope{p, 0.0, -0.5 * wexp}, rule, rd);
    total.error = total.error * std::abs(r.value) + std::abs(total.value) * r.error_estimate;
    total.value *= r.value;
    total.converged = total.converged && r.converged;
  }
  return total;
}

Estimate truncated_integral(const ProbeFunction& probe, Quantity q, double radius,
                            const quad::QuadratureRule& rule) {
  if (!(radius > 0.0)) throw std::invalid_argument("truncated_integral: radius must be positive");
  if (probe.mode() != Mode::euclidean)
    throw std::invalid_argument("truncated_integral: Euclidean probes only");
  const bool radial = probe.structure() == Structure::radial;
  if (!radial && probe.dimension() != 1)
    throw std::invalid_argument("truncated_integral: radial or one-dimensional probes only");
  const Profile& u = probe.factors()[0];
  Kernel k = [q](auto x, auto uu, auto du, auto out) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      switch (q) {
        case Quantity::l2_norm_sq:
          out[i] = uu[i] * uu[i];
          break;
        case Quantity::fisher:
          out[i] = du[i] * du[i];
          break;
        case Quantity::raw_entropy:
          out[i] = uu[i] == 0.0 ? 0.0 : uu[i] * uu[i] * log_sq(uu[i]);
          break;
        case Quantity::second_moment:
          out[i] = x[i] * x[i] * uu[i] * uu[i];
          break;
      }
    }
  };
  quad::IntegralResult r;
  if (radial) {
    r = detail::integrate_profile_on(u, k, 0.0, radius, rule, probe.dimension());
  } else {
    r = detail::integrate_profile_on(u, k, -radius, radius, rule, 0);
  }
  return from(r);
}

}  // namespace lsi
