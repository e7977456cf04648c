#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lsi/flows.hpp"
#include "lsi/simd.hpp"

namespace lsi::flows {

HermiteSeries::HermiteSeries(std::vector<double> coeffs, double window, double floor)
    : coeffs_(std::move(coeffs)), window_(window), floor_(floor) {
  if (coeffs_.empty()) throw std::invalid_argument("HermiteSeries: no coefficients");
  if (std::abs(coeffs_[0] - 1.0) > 1e-12) throw std::invalid_argument("HermiteSeries: c_0 must be 1");
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw std::invalid_argument("HermiteSeries: coefficients must be finite");
  if (!(window > 0.0)) throw std::invalid_argument("HermiteSeries: window must be > 0");
  if (!(floor > 0.0)) throw std::invalid_argument("HermiteSeries: floor must be > 0");
}

double HermiteSeries::value(double x) const {
  double v = 0.0, d1 = 0.0, d2 = 0.0;
  simd::hermite_series(coeffs_, std::span<const double>(&x, 1), std::span<double>(&v, 1),
                       std::span<double>(&d1, 1), std::span<double>(&d2, 1));
  return v;
}

double HermiteSeries::grid_minimum(int points) const {
  if (points < 2) throw std::invalid_argument("grid_minimum: at least two points");
  std::vector<double> x(points), v(points), d1(points), d2(points);
  for (int i = 0; i < points; ++i) x[i] = -window_ + 2.0 * window_ * i / (points - 1);
  simd::hermite_series(coeffs_, x, v, d1, d2);
  return *std::min_element(v.begin(), v.end());
}

HermiteSeries hermite_projection(const GaussianMixture& m, int K, double window) {
  return HermiteSeries(m.hermite_coefficients(K), window);
}

HermiteSeries ou_evolve(const HermiteSeries& h, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("ou_evolve: t must be >= 0");
  std::vector<double> c = h.coefficients();
  for (std::size_t k = 1; k < c.size(); ++k) c[k] *= std::exp(-double(k) * t);
  return HermiteSeries(std::move(c), h.window(), h.floor());
}

}  // namespace lsi::flows
