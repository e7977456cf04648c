#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "lsi/probe.hpp"
#include "lsi/quad.hpp"

namespace lsi::detail {

// Integrand magnitude is bounded by |u|^power * exp(c1 x + c2 x^2); used to place windows.
struct Envelope {
  double power = 2.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

// out[i] = integrand at x[i] given u(x[i]) and u'(x[i]).
using Kernel = std::function<void(std::span<const double> x, std::span<const double> u,
                                  std::span<const double> du, std::span<double> out)>;

// Window [lo, hi] of one piece outside which the envelope is negligible; empty when lo >= hi.
struct Window {
  double lo, hi, initial_width;
};
Window piece_window(const Piece& p, const Envelope& env, int radial_dim);

// Cuts (window ends, piece ends, zeros, extra breakpoints) for adaptive integration.
std::vector<double> integration_cuts(const Profile& u, const Envelope& env, int radial_dim,
                                     std::span<const double> extra_breaks = {});

// Integral over the profile domain of kernel(x) dx, times |S^{d-1}| r^{d-1} when radial_dim > 0.
quad::IntegralResult integrate_profile(const Profile& u, const Kernel& k, const Envelope& env,
                                       const quad::QuadratureRule& rule, int radial_dim = 0,
                                       std::span<const double> extra_breaks = {});

// Same integral restricted to [a, b].
quad::IntegralResult integrate_profile_on(const Profile& u, const Kernel& k, double a, double b,
                                          const quad::QuadratureRule& rule, int radial_dim = 0);

// sqrt of the one-dimensional Gaussian density folded in: u = f * gamma_1^(1/2).
Profile fold_half_gaussian(const Profile& f, int radial_dim = 0);

// 0 * log 0 = 0 convention; log|u|^2 computed from log|u| to avoid underflow.
inline double log_sq(double u) { return u == 0.0 ? 0.0 : 2.0 * std::log(std::abs(u)); }

}  // namespace lsi::detail
