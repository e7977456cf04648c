#pragma once

#include <string_view>
#include <vector>

#include "lsi/probe.hpp"
#include "lsi/quad.hpp"

namespace lsi::manifold {

//   gaussian_v:       v(x) = a exp(b.x)                       (gaussian mode)
//   euclid_u:         u(x) = a exp(-|x - b|^2 / 4)            (euclidean mode)
//   euclid_u_lambda:  u(x) = a exp(-|x - b|^2 / (4 lambda))   (euclidean mode)
enum class PointFamily { gaussian_v, euclid_u, euclid_u_lambda };
std::string_view point_family_name(PointFamily f);

struct ManifoldPoint {
  PointFamily family = PointFamily::gaussian_v;
  double a = 1.0;
  std::vector<double> b;  // size d
  double lambda = 1.0;
  void validate() const;
};

ProbeFunction eval_optimizer(const ManifoldPoint& pt);

struct SearchOptions {
  quad::QuadratureRule rule = quad::QuadratureRule::adaptive(1e-13);
  std::vector<double> grid = {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0};
  int max_newton = 100;
  double gradient_tolerance = 1e-10;
};

struct L2Distance {
  double distance_sq = 0.0;
  ManifoldPoint argmin;
  // Best distance^2 after each start, in start order (non-increasing).
  std::vector<double> history;
  // |d distance^2 / d b| at the argmin.
  double gradient_norm = 0.0;
};

// inf over (a, b) of |v - a e^{b.x}|^2 in L^2(gamma), for product gaussian-mode probes.
L2Distance l2_distance_to_manifold(const ProbeFunction& v, const SearchOptions& opts = {});

struct H1Distance {
  double distance_sq = 0.0;
  // Minimiser w = amplitude * exp(slope * x); slope 0 stands for the limit of vanishing slope.
  double slope = 0.0;
  double amplitude = 0.0;
  std::vector<double> history;
  double gradient_norm = 0.0;
};

// inf over w in the manifold of |v' - w'|^2 in L^2(gamma), one-dimensional gaussian-mode probes.
H1Distance h1_seminorm_distance_to_manifold(const ProbeFunction& v, const SearchOptions& opts = {});

// Starting slopes: the grid, the centre-of-mass heuristic and the exponential slope of every piece.
std::vector<double> start_slopes(const Profile& f, const SearchOptions& opts);

}  // namespace lsi::manifold
