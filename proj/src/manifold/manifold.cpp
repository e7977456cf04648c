#include "lsi/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lsi/detail/factor_integral.hpp"
#include "lsi/errors.hpp"

namespace lsi::manifold {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kL2Pi = std::log(2.0 * std::numbers::pi);

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// K(beta) = int h(x) exp(beta x - beta^2) d gamma with h = f or h = f', and two beta-derivatives.
struct Projection {
  double k = 0.0, k1 = 0.0, k2 = 0.0;
};

class Projector {
 public:
  Projector(const Profile& f, bool derivative, const SearchOptions& o)
      : u_(detail::fold_half_gaussian(f)), derivative_(derivative), rule_(o.rule) {}

  Projection at(double beta) const {
    Projection p;
    for (int order = 0; order < 3; ++order) {
      detail::Kernel k = [&](auto x, auto u, auto du, auto out) {
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double h = derivative_ ? du[i] + 0.5 * x[i] * u[i] : u[i];
          const double y = x[i] - 2.0 * beta;
          const double poly = order == 0 ? 1.0 : order == 1 ? y : y * y - 2.0;
          out[i] = h * poly * std::exp(-0.25 * kL2Pi - 0.25 * x[i] * x[i] + beta * x[i] - beta * beta);
        }
      };
      const double v = detail::integrate_profile(u_, k, detail::Envelope{1.0, beta, -0.25}, rule_, 0,
                                                 std::span<const double>())
                           .value;
      (order == 0 ? p.k : order == 1 ? p.k1 : p.k2) = v;
    }
    return p;
  }

  double value(double beta) const {
    detail::Kernel k = [&](auto x, auto u, auto du, auto out) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = derivative_ ? du[i] + 0.5 * x[i] * u[i] : u[i];
        out[i] = h * std::exp(-0.25 * kL2Pi - 0.25 * x[i] * x[i] + beta * x[i] - beta * beta);
      }
    };
    return detail::integrate_profile(u_, k, detail::Envelope{1.0, beta, -0.25}, rule_).value;
  }

  // int h^2 d gamma
  double norm_sq() const {
    detail::Kernel k = [&](auto x, auto u, auto du, auto out) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = derivative_ ? du[i] + 0.5 * x[i] * u[i] : u[i];
        out[i] = h * h;
      }
    };
    return detail::integrate_profile(u_, k, detail::Envelope{2.0, 0.0, 0.0}, rule_).value;
  }

  // int x h^2 d gamma / int h^2 d gamma
  double centre() const {
    detail::Kernel k = [&](auto x, auto u, auto, auto out) {
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * u[i] * u[i];
    };
    const double m1 = detail::integrate_profile(u_, k, detail::Envelope{2.0, 0.0, 0.0}, rule_).value;
    detail::Kernel k0 = [&](auto, auto u, auto, auto out) {
      for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] * u[i];
    };
    const double m0 = detail::integrate_profile(u_, k0, detail::Envelope{2.0, 0.0, 0.0}, rule_).value;
    return m0 > 0.0 ? m1 / m0 : 0.0;
  }

 private:
  Profile u_;
  bool derivative_;
  quad::QuadratureRule rule_;
};

struct Maximum {
  double beta = 0.0;
  double g = 0.0;   // K(beta)^2
  double k = 0.0;   // K(beta)
  double grad = 0.0;  // d(K^2)/d beta
};

// Safeguarded Newton ascent on K^2 from one start.
Maximum ascend(const Projector& pr, double beta, const SearchOptions& o) {
  Projection p = pr.at(beta);
  double g = p.k * p.k;
  for (int it = 0; it < o.max_newton; ++it) {
    const double g1 = 2.0 * p.k * p.k1;
    const double g2 = 2.0 * (p.k1 * p.k1 + p.k * p.k2);
    if (std::abs(g1) <= o.gradient_tolerance) break;
    double step = g2 < 0.0 ? -g1 / g2 : (g1 > 0.0 ? 0.5 : -0.5);
    step = std::clamp(step, -2.0, 2.0);
    bool moved = false;
    for (int h = 0; h < 60; ++h) {
      const double kb = pr.value(beta + step);
      if (kb * kb >= g) {
        beta += step;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
    p = pr.at(beta);
    g = p.k * p.k;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(beta))) break;
  }
  return {beta, g, p.k, 2.0 * p.k * p.k1};
}

std::vector<Maximum> search(const Projector& pr, const std::vector<double>& starts,
                            const SearchOptions& o) {
  std::vector<Maximum> out;
  for (double s : starts) out.push_back(ascend(pr, s, o));
  return out;
}

ProbeSpec optimizer_spec(const ManifoldPoint& pt) {
  ProbeSpec s;
  s.family = pt.family == PointFamily::gaussian_v ? Family::gaussian_optimizer : Family::euclid_gaussian;
  s.d = int(pt.b.size());
  s.b = pt.b;
  s.a = pt.a;
  s.lambda = pt.lambda;
  return s;
}

}  // namespace

std::string_view point_family_name(PointFamily f) {
  switch (f) {
    case PointFamily::gaussian_v: return "gaussian_v";
    case PointFamily::euclid_u: return "euclid_u";
    case PointFamily::euclid_u_lambda: return "euclid_u_lambda";
  }
  return "?";
}

void ManifoldPoint::validate() const {
  if (b.empty()) throw std::invalid_argument("ManifoldPoint: b must have the dimension as size");
  for (double x : b)
    if (!std::isfinite(x)) throw std::invalid_argument("ManifoldPoint: b must be finite");
  if (!std::isfinite(a)) throw std::invalid_argument("ManifoldPoint: a must be finite");
  if (family == PointFamily::euclid_u_lambda && !(lambda > 0.0))
    throw std::invalid_argument("ManifoldPoint: lambda must be > 0");
}

ProbeFunction eval_optimizer(const ManifoldPoint& pt) {
  pt.validate();
  const int d = int(pt.b.size());
  const double lambda = pt.family == PointFamily::euclid_u_lambda ? pt.lambda : 1.0;
  std::vector<Profile> f;
  for (int j = 0; j < d; ++j) {
    const double b = pt.b[j];
    const double amp = j == 0 ? pt.a : 1.0;
    Expression e = pt.family == PointFamily::gaussian_v
                       ? Expression::exp_quadratic(0.0, b, 0.0, amp)
                       : Expression::exp_quadratic(-b * b / (4.0 * lambda), b / (2.0 * lambda),
                                                   -1.0 / (4.0 * lambda), amp);
    f.push_back(Profile({{-kInf, kInf, e}}));
  }
  std::string label = "manifold(" + std::string(point_family_name(pt.family)) + ",a=" + fmt(pt.a) + ",b=(";
  for (int j = 0; j < d; ++j) label += (j ? "," : "") + fmt(pt.b[j]);
  label += ")";
  if (pt.family == PointFamily::euclid_u_lambda) label += ",lambda=" + fmt(pt.lambda);
  label += ")";
  const Mode mode = pt.family == PointFamily::gaussian_v ? Mode::gaussian : Mode::euclidean;
  ProbeFunction p(mode, d, Structure::product, std::move(f), optimizer_spec(pt), label);
  bool even = std::all_of(pt.b.begin(), pt.b.end(), [](double x) { return x == 0.0; });
  return p.with_exact(closed_form_table(p)).with_symmetry(even);
}

std::vector<double> start_slopes(const Profile& f, const SearchOptions& o) {
  std::vector<double> s = o.grid;
  const Projector pr(f, false, o);
  s.push_back(0.5 * pr.centre());
  for (const auto& p : f.pieces()) {
    const Expression& e = p.expr;
    if (!e.is_zero() && e.q2 == 0.0 && e.q1 != 0.0) s.push_back(e.q1);
  }
  std::vector<double> out;
  for (double x : s)
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  return out;
}

L2Distance l2_distance_to_manifold(const ProbeFunction& v, const SearchOptions& o) {
  if (v.mode() != Mode::gaussian) throw std::invalid_argument("l2_distance_to_manifold: gaussian mode required");
  if (v.structure() != Structure::product)
    throw std::invalid_argument("l2_distance_to_manifold: product probes only");
  const int d = v.dimension();
  std::vector<std::vector<Maximum>> runs;
  double n = 1.0;
  for (const auto& f : v.factors()) {
    const Projector pr(f, false, o);
    n *= pr.norm_sq();
    runs.push_back(search(pr, start_slopes(f, o), o));
  }
  std::size_t longest = 0;
  for (const auto& r : runs) longest = std::max(longest, r.size());
  L2Distance out;
  std::vector<Maximum> best(d);
  for (std::size_t k = 0; k < longest; ++k) {
    for (int j = 0; j < d; ++j)
      if (k < runs[j].size() && (k == 0 || runs[j][k].g > best[j].g)) best[j] = runs[j][k];
    double prod = 1.0;
    for (int j = 0; j < d; ++j) prod *= best[j].g;
    out.history.push_back(std::max(0.0, n - prod));
  }
  for (std::size_t k = 1; k < out.history.size(); ++k)
    out.history[k] = std::min(out.history[k], out.history[k - 1]);
  out.distance_sq = out.history.back();
  out.argmin.family = PointFamily::gaussian_v;
  out.argmin.a = 1.0;
  double grad2 = 0.0;
  for (int j = 0; j < d; ++j) {
    out.argmin.b.push_back(best[j].beta);
    out.argmin.a *= best[j].k * std::exp(-best[j].beta * best[j].beta);
    double others = 1.0;
    for (int i = 0; i < d; ++i)
      if (i != j) others *= best[i].g;
    grad2 += std::pow(best[j].grad * others, 2);
  }
  out.gradient_norm = std::sqrt(grad2);
  return out;
}

H1Distance h1_seminorm_distance_to_manifold(const ProbeFunction& v, const SearchOptions& o) {
  if (v.mode() != Mode::gaussian || v.dimension() != 1 || v.structure() != Structure::product)
    throw std::invalid_argument("h1_seminorm_distance_to_manifold: one-dimensional gaussian probe required");
  const Profile& f = v.factors()[0];
  const Projector pr(f, true, o);
  const double fisher = pr.norm_sq();
  const auto runs = search(pr, start_slopes(f, o), o);
  H1Distance out;
  Maximum best = runs.front();
  for (const auto& m : runs) {
    if (m.g > best.g) best = m;
    out.history.push_back(std::max(0.0, fisher - best.g));
  }
  out.distance_sq = out.history.back();
  out.slope = best.beta;
  out.amplitude = best.beta != 0.0 ? best.k * std::exp(-best.beta * best.beta) / best.beta : kInf;
  out.gradient_norm = std::abs(best.grad);
  return out;
}

}  // namespace lsi::manifold
