#pragma once

#include <functional>
#include <span>
#include <vector>

namespace lsi::quad {

enum class RuleKind { gauss_hermite, adaptive_piecewise, radial };

struct QuadratureRule {
  RuleKind kind = RuleKind::adaptive_piecewise;
  // Probabilists' Gauss-Hermite nodes/weights (weights sum to 1); empty for adaptive rules.
  std::vector<double> nodes;
  std::vector<double> weights;
  double tolerance = 1e-10;
  // Relative floor applied on top of the absolute tolerance (roundoff-limited integrals).
  double relative_tolerance = 1e-13;
  int max_depth = 60;
  int max_panels = 50000;

  static QuadratureRule gauss_hermite(int order, double tolerance = 1e-10);
  static QuadratureRule adaptive(double tolerance = 1e-10, int max_depth = 60);
  static QuadratureRule radial(double tolerance = 1e-10, int max_depth = 60);
  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  long evaluations = 0;
};

struct RadialResult : IntegralResult {
  std::vector<double> radii;
  std::vector<double> partial_values;
  bool divergent = false;
};

using BatchFunction = std::function<void(std::span<const double> x, std::span<double> y)>;
using ScalarFunction = std::function<double(double)>;

BatchFunction batched(ScalarFunction f);

// Adaptive 21-point Gauss-Kronrod over the panels [cuts[i], cuts[i+1]], each first split to
// width <= max_initial_width. Global error control, deterministic pairwise summation.
IntegralResult integrate_panels(const BatchFunction& f, std::span<const double> cuts,
                                const QuadratureRule& rule, double max_initial_width = 1.0);

IntegralResult integrate_interval(const BatchFunction& f, double a, double b,
                                  const QuadratureRule& rule, double max_initial_width = 1.0);

// Integral of f against the standard Gaussian measure on R.
IntegralResult integrate_gaussian(const ScalarFunction& f, std::span<const double> breakpoints,
                                  const QuadratureRule& rule);
IntegralResult integrate_gaussian_batch(const BatchFunction& f,
                                        std::span<const double> breakpoints,
                                        const QuadratureRule& rule);

// Integral of f dx over [-R, R] (or [0, R] when half_line) for each radius of the schedule.
// The result value is the last partial sum plus the optional tail model tail(R).
// Divergence is declared when the increments keep one sign without geometric decay.
RadialResult integrate_lebesgue(const BatchFunction& f, std::span<const double> breakpoints,
                                const QuadratureRule& rule,
                                std::span<const double> radius_schedule,
                                const ScalarFunction& tail = nullptr, bool half_line = false);
RadialResult integrate_lebesgue(const ScalarFunction& f, std::span<const double> breakpoints,
                                const QuadratureRule& rule,
                                std::span<const double> radius_schedule,
                                const ScalarFunction& tail = nullptr, bool half_line = false);

// Normal distribution helpers.
double normal_pdf(double x);
double normal_cdf(double x);
double normal_sf(double x);
double normal_quantile(double p);
// Phi_c(x) / phi(x), stable for large positive x.
double mills_ratio(double x);

// Integrals of x^k exp(A + B x - C x^2) over [lo, hi] for k = 0, 1, 2, with C > 0.
// Endpoints may be infinite.
struct GaussMoments {
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  // Centre mu = B / (2C) and the central moments int (x-mu)^k exp(...) for k = 1, 2.
  double mu = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};
GaussMoments exp_quadratic_moments(double A, double B, double C, double lo, double hi);

// Gauss-Hermite nodes and weights for the standard Gaussian measure.
void gauss_hermite_nodes(int order, std::vector<double>& nodes, std::vector<double>& weights);

double pairwise_sum(std::span<const double> values);

}  // namespace lsi::quad
