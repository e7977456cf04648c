#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "lsi/errors.hpp"
#include "lsi/quad.hpp"
#include "lsi/simd.hpp"

namespace lsi::quad {

namespace {

constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Tables {
  std::array<double, 21> unit{};
  std::array<double, 21> wk{};
  std::array<double, 21> wg{};
  Tables() {
    for (int j = 0; j <= 10; ++j) {
      unit[j] = -kXgk[j];
      wk[j] = kWgk[j];
      if (j < 10) {
        unit[20 - j] = kXgk[j];
        wk[20 - j] = kWgk[j];
      }
    }
    for (int g = 0; g < 5; ++g) {
      const int j = 2 * g + 1;
      wg[j] = kWg[g];
      wg[20 - j] = kWg[g];
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

struct Panel {
  double a, b;
  double value, error;
  int depth;
};

struct WorseFirst {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.a > y.a;
  }
};

Panel evaluate(const BatchFunction& f, double a, double b, int depth, long& evals) {
  const Tables& t = tables();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<double, 21> x{}, y{}, ay{};
  for (int j = 0; j < 21; ++j) x[j] = c + h * t.unit[j];
  x[10] = c;
  f(std::span<const double>(x), std::span<double>(y));
  evals += 21;
  for (int j = 0; j < 21; ++j) {
    if (!std::isfinite(y[j]))
      throw NumericalError("integrand is not finite at x = " + std::to_string(x[j]));
  }
  const auto& k = simd::kernels();
  const double rk = k.dot(y.data(), t.wk.data(), 21);
  const double rg = k.dot(y.data(), t.wg.data(), 21);
  for (int j = 0; j < 21; ++j) ay[j] = std::abs(y[j]);
  const double resabs = k.dot(ay.data(), t.wk.data(), 21);
  const double mean = 0.5 * rk;
  for (int j = 0; j < 21; ++j) ay[j] = std::abs(y[j] - mean);
  const double resasc = k.dot(ay.data(), t.wk.data(), 21);
  double err = std::abs(rk - rg) * h;
  const double asc = resasc * h;
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs * h;
  err = std::max(err, floor);
  return Panel{a, b, rk * h, err, depth};
}

}  // namespace

BatchFunction batched(ScalarFunction f) {
  return [f = std::move(f)](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
  };
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

IntegralResult integrate_panels(const BatchFunction& f, std::span<const double> cuts,
                                const QuadratureRule& rule, double max_initial_width) {
  rule.validate();
  IntegralResult res;
  if (cuts.size() < 2) return res;
  if (!(max_initial_width > 0.0))
    throw std::invalid_argument("integrate_panels: initial width must be positive");
  std::priority_queue<Panel, std::vector<Panel>, WorseFirst> queue;
  std::vector<Panel> done;
  long evals = 0;
  double total_err = 0.0, total_val = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    if (!std::isfinite(a) || !std::isfinite(b))
      throw std::invalid_argument("integrate_panels: cuts must be finite");
    const int m = std::max(1, int(std::ceil((b - a) / max_initial_width)));
    for (int j = 0; j < m; ++j) {
      const double lo = a + (b - a) * j / m;
      const double hi = j + 1 == m ? b : a + (b - a) * (j + 1) / m;
      Panel p = evaluate(f, lo, hi, 0, evals);
      total_err += p.error;
      total_val += p.value;
      queue.push(p);
    }
  }
  int panels = int(queue.size());
  while (!queue.empty()) {
    const double target = std::max(rule.tolerance, rule.relative_tolerance * std::abs(total_val));
    if (total_err <= target) break;
    if (panels >= rule.max_panels) {
      res.converged = false;
      break;
    }
    Panel p = queue.top();
    queue.pop();
    const double mid = 0.5 * (p.a + p.b);
    if (p.depth >= rule.max_depth || !(mid > p.a && mid < p.b)) {
      done.push_back(p);
      res.converged = false;
      continue;
    }
    Panel l = evaluate(f, p.a, mid, p.depth + 1, evals);
    Panel r = evaluate(f, mid, p.b, p.depth + 1, evals);
    total_err += l.error + r.error - p.error;
    total_val += l.value + r.value - p.value;
    queue.push(l);
    queue.push(r);
    ++panels;
  }
  while (!queue.empty()) {
    done.push_back(queue.top());
    queue.pop();
  }
  std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  std::vector<double> vals(done.size()), errs(done.size());
  for (std::size_t i = 0; i < done.size(); ++i) {
    vals[i] = done[i].value;
    errs[i] = done[i].error;
  }
  res.value = pairwise_sum(vals);
  res.error_estimate = pairwise_sum(errs);
  res.evaluations = evals;
  const double target = std::max(rule.tolerance, rule.relative_tolerance * std::abs(res.value));
  if (res.error_estimate > target) res.converged = false;
  return res;
}

IntegralResult integrate_interval(const BatchFunction& f, double a, double b,
                                  const QuadratureRule& rule, double max_initial_width) {
  const double cuts[2] = {a, b};
  return integrate_panels(f, cuts, rule, max_initial_width);
}

}  // namespace lsi::quad
