#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lsi/functionals.hpp"

namespace lsi {

ProbeFunction gauss_to_euclid(const ProbeFunction& v) {
  if (v.mode() != Mode::gaussian) throw std::invalid_argument("gauss_to_euclid: probe must be in gaussian mode");
  const double l2pi = std::log(2.0 * std::numbers::pi);
  std::vector<Profile> f;
  if (v.structure() == Structure::radial) {
    f.push_back(v.factors()[0].times_exp(-0.25 * v.dimension() * l2pi, 0.0, -0.25));
  } else {
    for (const auto& p : v.factors()) f.push_back(p.times_exp(-0.25 * l2pi, 0.0, -0.25));
  }
  ProbeFunction u(Mode::euclidean, v.dimension(), v.structure(), std::move(f), v.spec(),
                  v.label());
  return u.with_exact(closed_form_table(u)).with_symmetry(v.even());
}

ProbeFunction euclid_to_gauss(const ProbeFunction& u, double lambda) {
  if (u.mode() != Mode::euclidean)
    throw std::invalid_argument("euclid_to_gauss: probe must be in euclidean mode");
  if (!(lambda > 0.0)) throw std::invalid_argument("euclid_to_gauss: lambda must be > 0");
  const double l2pi = std::log(2.0 * std::numbers::pi);
  const double s = std::sqrt(lambda);
  std::vector<Profile> f;
  if (u.structure() == Structure::radial) {
    const double c = 0.25 * u.dimension() * (l2pi - std::log(lambda));
    f.push_back(u.factors()[0].rescaled(s).times_exp(c, 0.0, 0.25));
  } else {
    const double c = 0.25 * (l2pi - std::log(lambda));
    for (const auto& p : u.factors()) f.push_back(p.rescaled(s).times_exp(c, 0.0, 0.25));
  }
  ProbeFunction v(Mode::gaussian, u.dimension(), u.structure(), std::move(f), u.spec(),
                  u.label());
  return v.with_exact(closed_form_table(v)).with_symmetry(u.even());
}

ProbeFunction to_mode(const ProbeFunction& p, Mode mode) {
  if (p.mode() == mode) return p;
  return mode == Mode::euclidean ? gauss_to_euclid(p) : euclid_to_gauss(p, 1.0);
}

}  // namespace lsi
