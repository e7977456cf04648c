#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lsi/probe.hpp"
#include "lsi/quad.hpp"

namespace lsi {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  bool divergent = false;
};

// All integrals are against gamma (gaussian mode) or dx (euclidean mode).
//   entropy      = int |f|^2 log(|f|^2 / l2_norm_sq)   (relative, normalization free)
//   raw_entropy  = int |f|^2 log |f|^2
//   abs_entropy  = int | |f|^2 log |f|^2 |
//   entropy_below_one = int_{|f| <= 1} |f|^2 log |f|^2   (<= 0)
//   deficit      = (fisher - entropy/2) / l2_norm_sq                     gaussian
//                  (fisher - entropy/2 - (d/4) log(2 pi e^2) l2_norm_sq) / l2_norm_sq   euclidean
struct FunctionalReport {
  Mode mode = Mode::gaussian;
  int dimension = 1;
  Estimate l2_norm_sq;
  Estimate fisher;
  Estimate entropy;
  Estimate raw_entropy;
  Estimate abs_entropy;
  Estimate entropy_below_one;
  Estimate second_moment;
  Estimate deficit;
  std::vector<Estimate> first_moment;
  // gaussian mode only: int |v - 1| d gamma
  std::optional<Estimate> l1_deviation;
  bool nonnegative = false;

  std::vector<std::string> divergent_fields() const;
  std::vector<std::string> unconverged_fields() const;
  bool any_divergent() const { return !divergent_fields().empty(); }
  // Largest error estimate among the listed scalar fields.
  double max_error() const;
};

struct ReportOptions {
  quad::QuadratureRule rule = quad::QuadratureRule::adaptive(1e-10);
  bool use_gauss_hermite = true;
  int gauss_hermite_order = 200;
  // Radii for probes with algebraic tails.
  std::vector<double> radius_schedule = {1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8};
};

FunctionalReport report(const ProbeFunction& probe, Mode mode, const ReportOptions& opts = {});
inline FunctionalReport report(const ProbeFunction& probe) { return report(probe, probe.mode()); }

// u = v sqrt(gamma)
ProbeFunction gauss_to_euclid(const ProbeFunction& v);
// v(x) = lambda^{-d/4} gamma(x)^{-1/2} u(x / sqrt(lambda))
ProbeFunction euclid_to_gauss(const ProbeFunction& u, double lambda = 1.0);
ProbeFunction to_mode(const ProbeFunction& p, Mode mode);

// 1/4 (int |v - 1| d gamma)^2; requires a gaussian report with unit norm of a nonnegative probe.
double ckp_lower_bound(const FunctionalReport& gaussian_report);

// int |v|^p d gamma (gaussian) or int |u|^p dx (euclidean), in the probe's native mode.
Estimate lp_integral(const ProbeFunction& probe, double p,
                     const quad::QuadratureRule& rule = quad::QuadratureRule::adaptive(1e-12));

enum class Quantity { l2_norm_sq, fisher, raw_entropy, second_moment };
// int_{|x| < R} of the quantity's density, for radial or one-dimensional Euclidean probes.
Estimate truncated_integral(const ProbeFunction& probe, Quantity q, double radius,
                            const quad::QuadratureRule& rule = quad::QuadratureRule::adaptive(1e-11));

struct W2Options {
  double bisection_tolerance = 1e-12;
  double z_limit = 7.5;
  quad::QuadratureRule rule = quad::QuadratureRule::adaptive(1e-10);
};
// W_2(|v|^2 gamma, gamma) for a unit-norm one-dimensional gaussian-mode probe.
double w2_distance_1d(const ProbeFunction& probe, const W2Options& opts = {});

}  // namespace lsi
