#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lsi/quad.hpp"

namespace lsi::quad {

namespace {

constexpr double kGaussianWindow = 39.0;

std::vector<double> cuts_between(double lo, double hi, std::span<const double> breakpoints) {
  std::vector<double> c{lo};
  for (double b : breakpoints)
    if (b > lo && b < hi) c.push_back(b);
  c.push_back(hi);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

}  // namespace

IntegralResult integrate_gaussian_batch(const BatchFunction& f,
                                        std::span<const double> breakpoints,
                                        const QuadratureRule& rule) {
  rule.validate();
  if (rule.kind == RuleKind::gauss_hermite && breakpoints.empty()) {
    std::vector<double> y(rule.nodes.size());
    f(rule.nodes, y);
    std::vector<double> terms(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) terms[i] = rule.weights[i] * y[i];
    IntegralResult r;
    r.value = pairwise_sum(terms);
    // Compare against the half-order rule as a crude error indicator.
    const int half = std::max(1, int(rule.nodes.size()) / 2);
    std::vector<double> n2, w2;
    gauss_hermite_nodes(half, n2, w2);
    std::vector<double> y2(n2.size());
    f(n2, y2);
    for (std::size_t i = 0; i < y2.size(); ++i) y2[i] *= w2[i];
    r.error_estimate = std::abs(r.value - pairwise_sum(y2));
    r.converged = r.error_estimate <= std::max(rule.tolerance, rule.relative_tolerance * std::abs(r.value));
    r.evaluations = long(y.size() + y2.size());
    return r;
  }
  const auto cuts = cuts_between(-kGaussianWindow, kGaussianWindow, breakpoints);
  BatchFunction g = [&f](std::span<const double> x, std::span<double> y) {
    f(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double w = normal_pdf(x[i]);
      y[i] = w == 0.0 ? 0.0 : y[i] * w;
    }
  };
  return integrate_panels(g, cuts, rule, 1.0);
}

IntegralResult integrate_gaussian(const ScalarFunction& f, std::span<const double> breakpoints,
                                  const QuadratureRule& rule) {
  return integrate_gaussian_batch(batched(f), breakpoints, rule);
}

RadialResult integrate_lebesgue(const BatchFunction& f, std::span<const double> breakpoints,
                                const QuadratureRule& rule,
                                std::span<const double> radius_schedule,
                                const ScalarFunction& tail, bool half_line) {
  rule.validate();
  if (radius_schedule.empty())
    throw std::invalid_argument("integrate_lebesgue: empty radius schedule");
  for (std::size_t i = 0; i < radius_schedule.size(); ++i) {
    if (!(radius_schedule[i] > 0.0) || (i && !(radius_schedule[i] > radius_schedule[i - 1])))
      throw std::invalid_argument("integrate_lebesgue: radii must be positive and increasing");
  }
  RadialResult out;
  QuadratureRule sub = rule;
  sub.tolerance = rule.tolerance / double(radius_schedule.size());
  double partial = 0.0, errsum = 0.0, prev = 0.0;
  bool all_converged = true;
  for (std::size_t k = 0; k < radius_schedule.size(); ++k) {
    const double r0 = k ? radius_schedule[k - 1] : 0.0;
    const double r1 = radius_schedule[k];
    const double width = std::max(0.5, (r1 - r0) / 8.0);
    auto right = integrate_panels(f, cuts_between(r0, r1, breakpoints), sub, width);
    double inc = right.value;
    errsum += right.error_estimate;
    all_converged = all_converged && right.converged;
    out.evaluations += right.evaluations;
    if (!half_line) {
      auto left = integrate_panels(f, cuts_between(-r1, -r0, breakpoints), sub, width);
      inc += left.value;
      errsum += left.error_estimate;
      all_converged = all_converged && left.converged;
      out.evaluations += left.evaluations;
    }
    partial += inc;
    const double corrected = partial + (tail ? tail(r1) : 0.0);
    out.radii.push_back(r1);
    out.partial_values.push_back(corrected);
    prev = corrected;
  }
  out.value = prev;
  const auto& p = out.partial_values;
  const std::size_t n = p.size();
  const double last_step = n >= 2 ? std::abs(p[n - 1] - p[n - 2]) : 0.0;
  out.error_estimate = errsum + last_step;
  const double target = std::max(rule.tolerance, rule.relative_tolerance * std::abs(out.value));
  out.converged = all_converged && n >= 2 && last_step <= 10.0 * target;
  if (n >= 3 && !out.converged) {
    bool same_sign = true;
    for (std::size_t i = 2; i < n; ++i) {
      const double a = p[i] - p[i - 1], b = p[i - 1] - p[i - 2];
      if (a * b <= 0.0) same_sign = false;
    }
    const double dl = std::abs(p[n - 1] - p[n - 2]);
    const double dp = std::abs(p[n - 2] - p[n - 3]);
    out.divergent = same_sign && dl >= 0.5 * dp && dl > target;
  }
  return out;
}

RadialResult integrate_lebesgue(const ScalarFunction& f, std::span<const double> breakpoints,
                                const QuadratureRule& rule,
                                std::span<const double> radius_schedule,
                                const ScalarFunction& tail, bool half_line) {
  return integrate_lebesgue(batched(f), breakpoints, rule, radius_schedule, tail, half_line);
}

}  // namespace lsi::quad
