#include "lsi/detail/factor_integral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lsi/errors.hpp"

namespace lsi::detail {

namespace {
constexpr double kDecades = 15.0;  // envelope drop of exp(-kDecades^2 / 2) ~ 1e-49
}

Window piece_window(const Piece& p, const Envelope& env, int radial_dim) {
  const Expression& e = p.expr;
  Window w{p.lo, p.hi, 1.0};
  if (e.is_zero()) return {0.0, 0.0, 1.0};
  const bool finite = std::isfinite(p.lo) && std::isfinite(p.hi);
  if (e.base == BaseKind::bump || e.base == BaseKind::algebraic_log) {
    if (!finite) {
      if (e.base == BaseKind::bump) {
        // Support of the bump inside the piece.
        const double y0 = (0.0 - e.shift) / e.scale, y1 = (1.0 - e.shift) / e.scale;
        w.lo = std::max(p.lo, std::min(y0, y1));
        w.hi = std::min(p.hi, std::max(y0, y1));
      } else {
        throw TailViolation("algebraic tail needs a radius schedule");
      }
    }
    if (!(w.lo < w.hi)) return {0.0, 0.0, 1.0};
    w.initial_width = std::min(1.0, (w.hi - w.lo) / 4.0);
    return w;
  }
  const double a2 = env.power * e.q2 + env.c2;
  const double a1 = env.power * e.q1 + env.c1;
  const double extra = 2.0 * env.power * e.polynomial_degree() + (radial_dim > 1 ? radial_dim : 0);
  if (a2 < 0.0) {
    const double sigma = 1.0 / std::sqrt(-2.0 * a2);
    const double mu = -a1 / (2.0 * a2);
    const double peak = std::clamp(mu, p.lo, p.hi);
    const double half = sigma * (kDecades + extra + 6.0);
    w.lo = std::max(p.lo, peak - half);
    w.hi = std::min(p.hi, peak + half);
    w.initial_width = std::min(1.0, sigma);
    if (!(w.lo < w.hi)) return {0.0, 0.0, 1.0};
    return w;
  }
  if (a2 == 0.0 && a1 != 0.0) {
    const double len = (0.5 * kDecades * kDecades + 10.0 * (extra + 1.0)) / std::abs(a1);
    if (a1 < 0.0) {
      if (!std::isfinite(p.lo)) throw TailViolation("integrand grows towards -infinity");
      w.hi = std::min(p.hi, p.lo + len);
    } else {
      if (!std::isfinite(p.hi)) throw TailViolation("integrand grows towards +infinity");
      w.lo = std::max(p.lo, p.hi - len);
    }
    w.initial_width = std::min(1.0, 1.0 / std::abs(a1));
    return w;
  }
  if (!finite) throw TailViolation("integrand is not integrable on an unbounded piece");
  w.initial_width = std::min(1.0, (w.hi - w.lo) / 4.0);
  return w;
}

std::vector<double> integration_cuts(const Profile& u, const Envelope& env, int radial_dim,
                                     std::span<const double> extra_breaks) {
  std::vector<double> cuts;
  for (const auto& p : u.pieces()) {
    const Window w = piece_window(p, env, radial_dim);
    if (!(w.lo < w.hi)) continue;
    const int m = std::max(1, int(std::ceil((w.hi - w.lo) / w.initial_width)));
    for (int j = 0; j <= m; ++j) cuts.push_back(j == m ? w.hi : w.lo + (w.hi - w.lo) * j / m);
    for (double z : p.expr.zeros_in(w.lo, w.hi)) cuts.push_back(z);
    for (double z : extra_breaks)
      if (z > w.lo && z < w.hi) cuts.push_back(z);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

namespace {

quad::BatchFunction make_batch(const Profile& u, const Kernel& k, int radial_dim) {
  const double area = radial_dim > 0 ? sphere_area(radial_dim) : 1.0;
  return [&u, &k, radial_dim, area](std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    std::vector<double> v(n), dv(n);
    const std::size_t p0 = u.piece_index(x[0]);
    const std::size_t p1 = u.piece_index(x[n - 1]);
    if (p0 == p1) {
      u.pieces()[p0].expr.evaluate(x, v, dv);
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = u.value(x[i]);
        dv[i] = u.derivative(x[i]);
      }
    }
    k(x, v, dv, y);
    if (radial_dim > 0) {
      for (std::size_t i = 0; i < n; ++i)
        y[i] *= area * (radial_dim == 1 ? 1.0 : std::pow(x[i], radial_dim - 1));
    }
  };
}

}  // namespace

quad::IntegralResult integrate_profile(const Profile& u, const Kernel& k, const Envelope& env,
                                       const quad::QuadratureRule& rule, int radial_dim,
                                       std::span<const double> extra_breaks) {
  const auto cuts = integration_cuts(u, env, radial_dim, extra_breaks);
  if (cuts.size() < 2) return {};
  return quad::integrate_panels(make_batch(u, k, radial_dim), cuts, rule,
                                std::numeric_limits<double>::infinity());
}

quad::IntegralResult integrate_profile_on(const Profile& u, const Kernel& k, double a, double b,
                                          const quad::QuadratureRule& rule, int radial_dim) {
  if (!(a < b)) return {};
  std::vector<double> cuts{a};
  for (double c : u.breakpoints())
    if (c > a && c < b) cuts.push_back(c);
  cuts.push_back(b);
  return quad::integrate_panels(make_batch(u, k, radial_dim), cuts, rule, 1.0);
}

Profile fold_half_gaussian(const Profile& f, int radial_dim) {
  const int d = radial_dim > 0 ? radial_dim : 1;
  return f.times_exp(-0.25 * d * std::log(2.0 * std::numbers::pi), 0.0, -0.25);
}

}  // namespace lsi::detail
