#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "lsi/ineq.hpp"

namespace lsi::flows {

// gaussian: states are densities relative to gamma, evolved by Ornstein-Uhlenbeck.
// lebesgue: states are densities relative to dx, evolved by the heat semigroup.
enum class Reference { gaussian, lebesgue };
std::string_view reference_name(Reference r);

struct Component {
  double weight;
  double mean;
  double variance;
};

// One-dimensional Gaussian mixture sum w_i N(m_i, s_i^2), weights summing to 1.
class GaussianMixture {
 public:
  explicit GaussianMixture(std::vector<Component> components, Reference ref = Reference::gaussian);

  const std::vector<Component>& components() const { return components_; }
  Reference reference() const { return ref_; }

  // Lebesgue density.
  double density(double x) const;
  // log of the density relative to the reference, with first and second derivatives.
  void log_relative(std::span<const double> x, std::span<double> l, std::span<double> dl,
                    std::span<double> d2l) const;
  // Interval carrying all but a negligible part of the mass, and the component means as cuts.
  std::vector<double> cuts() const;
  // Coefficients c_0..c_K of d mu / d gamma in the orthonormal Hermite basis.
  std::vector<double> hermite_coefficients(int K) const;

 private:
  std::vector<Component> components_;
  Reference ref_;
};

GaussianMixture standard_gaussian(Reference ref = Reference::gaussian);
// Equal-weight bumps at +-mean with the given variance.
GaussianMixture two_bump(double mean = 2.0, double variance = 0.5, Reference ref = Reference::gaussian);

// rho = sum c_k h_k relative to gamma; positivity is checked on [-window, window].
class HermiteSeries {
 public:
  explicit HermiteSeries(std::vector<double> coeffs, double window = 7.5, double floor = 1e-6);

  const std::vector<double>& coefficients() const { return coeffs_; }
  int truncation() const { return int(coeffs_.size()) - 1; }
  double window() const { return window_; }
  double floor() const { return floor_; }
  double value(double x) const;
  // Smallest value on a uniform grid of the window.
  double grid_minimum(int points = 2001) const;

 private:
  std::vector<double> coeffs_;
  double window_;
  double floor_;
};

HermiteSeries hermite_projection(const GaussianMixture& m, int K = 64, double window = 7.5);

// Means m e^{-t}, variances 1 + (s^2 - 1) e^{-2t}.
GaussianMixture ou_evolve(const GaussianMixture& m, double t);
// c_k e^{-k t}
HermiteSeries ou_evolve(const HermiteSeries& h, double t);
// Variances s^2 + 2t.
GaussianMixture heat_evolve(const GaussianMixture& m, double t);

enum class Method { mixture, hermite };
std::string_view method_name(Method m);

// OU (gaussian reference), rho = density / gamma:
//   entropy = int rho log rho d gamma, fisher = int |(sqrt rho)'|^2 d gamma,
//   remainder = 1/2 int rho |(log rho)''|^2 d gamma, monitor = NaN.
// Heat (Lebesgue reference), density f:
//   entropy = int f log f, fisher = int |(sqrt f)'|^2,
//   remainder = int f |(log f)'' + J|^2 with J = int f |(log f)'|^2,
//   monitor = log(fisher) - 2 entropy.
struct FlowSample {
  double t = 0.0;
  double entropy = 0.0;
  double fisher = 0.0;
  double remainder = 0.0;
  double monitor = 0.0;
};

struct FlowTrace {
  Method method = Method::mixture;
  Reference reference = Reference::gaussian;
  std::vector<FlowSample> samples;
};

FlowSample sample(const GaussianMixture& initial, double t);
FlowSample sample(const HermiteSeries& initial, double t);
FlowTrace trace_functionals(const GaussianMixture& initial, std::span<const double> times);
FlowTrace trace_functionals(const HermiteSeries& initial, std::span<const double> times);

// count equally spaced times in [0.05, T - 0.05].
std::vector<double> interior_times(double T, int count);

struct IdentityRow {
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_error = 0.0;
  bool passed = false;
};

// Centred differences of step h.
//   entropy:  dE/dt against -4 I
//   fisher:   dI/dt + 2 I against -R (OU only)
//   monitor:  dG/dt against -2 R / J (heat only)
std::vector<IdentityRow> entropy_identity(const GaussianMixture& initial, std::span<const double> times,
                                          double h = 1e-3, double tolerance = 1e-4);
std::vector<IdentityRow> fisher_identity(const GaussianMixture& initial, std::span<const double> times,
                                         double h = 1e-3, double tolerance = 1e-3);
std::vector<IdentityRow> monitor_identity(const GaussianMixture& initial, std::span<const double> times,
                                          double h = 1e-3, double tolerance = 1e-3);

// lhs = deficit of sqrt(rho_0), rhs = int_0^T R dt (OU only).
ineq::BoundCheck deficit_via_flow(const GaussianMixture& initial, double t_max,
                                  double tolerance_floor = 1e-7, double error_factor = 10.0);

// G(t) along the heat flow (Lebesgue reference only).
std::vector<double> heat_renyi_monitor(const GaussianMixture& initial, std::span<const double> times);

}  // namespace lsi::flows
