#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lsi/errors.hpp"
#include "lsi/flows.hpp"
#include "lsi/quad.hpp"
#include "lsi/simd.hpp"

namespace lsi::flows {

namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
const quad::QuadratureRule kRule = quad::QuadratureRule::adaptive(1e-13);

enum class Field { entropy, fisher_raw, remainder_ou };

// Integrals against the reference measure of functions of log rho and its derivatives,
// weighted by rho (equivalently, against the mixture's Lebesgue density).
double mixture_integral(const GaussianMixture& m, const std::function<double(double, double, double)>& g) {
  const bool gauss = m.reference() == Reference::gaussian;
  quad::BatchFunction f = [&](std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    std::vector<double> l(n), dl(n), d2l(n);
    m.log_relative(x, l, dl, d2l);
    for (std::size_t i = 0; i < n; ++i) {
      const double logf = gauss ? l[i] - 0.5 * x[i] * x[i] - kHalfLog2Pi : l[i];
      y[i] = std::exp(logf) * g(l[i], dl[i], d2l[i]);
    }
  };
  const auto cuts = m.cuts();
  const auto r = quad::integrate_panels(f, cuts, kRule, 0.5);
  if (!r.converged) throw NumericalError("flow quadrature did not converge");
  return r.value;
}

double hermite_integral(const HermiteSeries& h, const std::function<double(double, double, double)>& g) {
  const auto& c = h.coefficients();
  quad::BatchFunction f = [&](std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    std::vector<double> v(n), d1(n), d2(n);
    simd::hermite_series(c, x, v, d1, d2);
    for (std::size_t i = 0; i < n; ++i) {
      const double dl = d1[i] / v[i];
      const double d2l = d2[i] / v[i] - dl * dl;
      y[i] = v[i] * std::exp(-0.5 * x[i] * x[i] - kHalfLog2Pi) * g(std::log(v[i]), dl, d2l);
    }
  };
  std::vector<double> cuts;
  const double w = h.window();
  const int panels = int(std::ceil(2.0 * w));
  for (int i = 0; i <= panels; ++i) cuts.push_back(-w + 2.0 * w * i / panels);
  const auto r = quad::integrate_panels(f, cuts, kRule, 0.5);
  if (!r.converged) throw NumericalError("flow quadrature did not converge");
  return r.value;
}

template <class State, class Integral>
FlowSample gaussian_sample(const State& s, double t, Integral integral) {
  FlowSample out;
  out.t = t;
  out.entropy = integral(s, [](double l, double, double) { return l; });
  out.fisher = 0.25 * integral(s, [](double, double dl, double) { return dl * dl; });
  out.remainder = 0.5 * integral(s, [](double, double, double d2l) { return d2l * d2l; });
  out.monitor = std::numeric_limits<double>::quiet_NaN();
  return out;
}

FlowSample heat_sample(const GaussianMixture& m, double t) {
  FlowSample out;
  out.t = t;
  out.entropy = mixture_integral(m, [](double l, double, double) { return l; });
  const double j = mixture_integral(m, [](double, double dl, double) { return dl * dl; });
  out.fisher = 0.25 * j;
  out.remainder = mixture_integral(m, [j](double, double, double d2l) { return (d2l + j) * (d2l + j); });
  out.monitor = std::log(out.fisher) - 2.0 * out.entropy;
  return out;
}

template <class State>
FlowTrace trace_of(const State& initial, std::span<const double> times, Method method, Reference ref) {
  std::vector<std::future<FlowSample>> jobs;
  for (double t : times) jobs.push_back(std::async(std::launch::async, [&initial, t] { return sample(initial, t); }));
  FlowTrace out;
  out.method = method;
  out.reference = ref;
  for (auto& j : jobs) out.samples.push_back(j.get());
  return out;
}

IdentityRow compare(double t, double lhs, double rhs, double tolerance) {
  IdentityRow r;
  r.t = t;
  r.lhs = lhs;
  r.rhs = rhs;
  const double scale = std::abs(rhs);
  r.relative_error = scale > 1e-12 ? std::abs(lhs - rhs) / scale : std::abs(lhs - rhs);
  r.passed = r.relative_error <= tolerance;
  return r;
}

void require(const GaussianMixture& m, Reference ref, const char* what) {
  if (m.reference() != ref) {
    std::ostringstream os;
    os << what << ": " << reference_name(ref) << " reference required";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

std::string_view method_name(Method m) { return m == Method::mixture ? "mixture" : "hermite"; }

FlowSample sample(const GaussianMixture& initial, double t) {
  if (initial.reference() == Reference::gaussian)
    return gaussian_sample(ou_evolve(initial, t), t, mixture_integral);
  return heat_sample(heat_evolve(initial, t), t);
}

FlowSample sample(const HermiteSeries& initial, double t) {
  const HermiteSeries h = ou_evolve(initial, t);
  const double lowest = h.grid_minimum();
  if (!(lowest >= h.floor())) {
    std::ostringstream os;
    os << "Hermite density falls to " << lowest << " below the floor " << h.floor() << " at t = " << t;
    throw NumericalError(os.str());
  }
  return gaussian_sample(h, t, hermite_integral);
}

FlowTrace trace_functionals(const GaussianMixture& initial, std::span<const double> times) {
  return trace_of(initial, times, Method::mixture, initial.reference());
}

FlowTrace trace_functionals(const HermiteSeries& initial, std::span<const double> times) {
  return trace_of(initial, times, Method::hermite, Reference::gaussian);
}

std::vector<double> interior_times(double T, int count) {
  if (count < 1 || !(T > 0.1)) throw std::invalid_argument("interior_times: need T > 0.1 and count >= 1");
  std::vector<double> t;
  for (int i = 0; i < count; ++i) t.push_back(count == 1 ? 0.5 * T : 0.05 + (T - 0.1) * i / (count - 1));
  return t;
}

std::vector<IdentityRow> entropy_identity(const GaussianMixture& initial, std::span<const double> times,
                                          double h, double tolerance) {
  std::vector<IdentityRow> out;
  for (double t : times) {
    if (t - h < 0.0) throw std::invalid_argument("entropy_identity: t - h must be >= 0");
    const FlowSample a = sample(initial, t - h), b = sample(initial, t + h), c = sample(initial, t);
    out.push_back(compare(t, (b.entropy - a.entropy) / (2.0 * h), -4.0 * c.fisher, tolerance));
  }
  return out;
}

std::vector<IdentityRow> fisher_identity(const GaussianMixture& initial, std::span<const double> times,
                                         double h, double tolerance) {
  require(initial, Reference::gaussian, "fisher_identity");
  std::vector<IdentityRow> out;
  for (double t : times) {
    if (t - h < 0.0) throw std::invalid_argument("fisher_identity: t - h must be >= 0");
    const FlowSample a = sample(initial, t - h), b = sample(initial, t + h), c = sample(initial, t);
    out.push_back(compare(t, (b.fisher - a.fisher) / (2.0 * h) + 2.0 * c.fisher, -c.remainder, tolerance));
  }
  return out;
}

std::vector<IdentityRow> monitor_identity(const GaussianMixture& initial, std::span<const double> times,
                                          double h, double tolerance) {
  require(initial, Reference::lebesgue, "monitor_identity");
  std::vector<IdentityRow> out;
  for (double t : times) {
    if (t - h < 0.0) throw std::invalid_argument("monitor_identity: t - h must be >= 0");
    const FlowSample a = sample(initial, t - h), b = sample(initial, t + h), c = sample(initial, t);
    out.push_back(compare(t, (b.monitor - a.monitor) / (2.0 * h), -2.0 * c.remainder / (4.0 * c.fisher),
                          tolerance));
  }
  return out;
}

ineq::BoundCheck deficit_via_flow(const GaussianMixture& initial, double t_max, double tolerance_floor,
                                  double error_factor) {
  require(initial, Reference::gaussian, "deficit_via_flow");
  if (!(t_max > 0.0)) throw std::invalid_argument("deficit_via_flow: t_max must be > 0");
  const FlowSample s0 = sample(initial, 0.0);
  quad::BatchFunction r = [&](std::span<const double> t, std::span<double> y) {
    for (std::size_t i = 0; i < t.size(); ++i) y[i] = sample(initial, t[i]).remainder;
  };
  const auto integral = quad::integrate_interval(r, 0.0, t_max, quad::QuadratureRule::adaptive(1e-10), 0.5);
  ineq::BoundCheck c;
  c.name = "deficit_via_flow";
  std::ostringstream label;
  label.precision(12);
  label << "mixture(";
  for (std::size_t i = 0; i < initial.components().size(); ++i) {
    const auto& k = initial.components()[i];
    label << (i ? ";" : "") << k.weight << "," << k.mean << "," << k.variance;
  }
  label << ")";
  c.probe = label.str();
  c.lhs = s0.fisher - 0.5 * s0.entropy;
  c.rhs = integral.value;
  c.margin = c.lhs - c.rhs;
  c.tolerance = tolerance_floor + error_factor * integral.error_estimate;
  c.status = c.margin >= -c.tolerance ? ineq::CheckStatus::passed : ineq::CheckStatus::failed;
  if (!integral.converged) c.note = "time quadrature did not converge";
  const FlowSample end = sample(initial, t_max);
  c.inputs = {{"t_max", t_max}, {"deficit_at_t_max", end.fisher - 0.5 * end.entropy}};
  return c;
}

std::vector<double> heat_renyi_monitor(const GaussianMixture& initial, std::span<const double> times) {
  require(initial, Reference::lebesgue, "heat_renyi_monitor");
  const FlowTrace tr = trace_functionals(initial, times);
  std::vector<double> g;
  for (const auto& s : tr.samples) g.push_back(s.monitor);
  return g;
}

}  // namespace lsi::flows
