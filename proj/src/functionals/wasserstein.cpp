#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lsi/detail/factor_integral.hpp"
#include "lsi/errors.hpp"
#include "lsi/functionals.hpp"

namespace lsi {

namespace {

constexpr double kMaxCell = 0.25;

// Cumulative mass tables of u^2 over a fine cut grid, from the left and from the right.
class Distribution {
 public:
  Distribution(const Profile& u, const quad::QuadratureRule& rule) : u_(u), rule_(rule) {
    const auto coarse = detail::integration_cuts(u, detail::Envelope{2.0, 0.0, 0.0}, 0);
    if (coarse.size() < 2) throw NumericalError("w2_distance_1d: empty support");
    cuts_.push_back(coarse.front());
    for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
      const int m = std::max(1, int(std::ceil((coarse[i + 1] - coarse[i]) / kMaxCell)));
      for (int j = 1; j <= m; ++j)
        cuts_.push_back(j == m ? coarse[i + 1] : coarse[i] + (coarse[i + 1] - coarse[i]) * j / m);
    }
    const std::size_t k = cuts_.size();
    std::vector<double> cell(k - 1);
    for (std::size_t i = 0; i + 1 < k; ++i) {
      cell[i] = mass(cuts_[i], cuts_[i + 1]);
      if (cell[i] < 0.0) throw NumericalError("w2_distance_1d: CDF is not monotone");
    }
    left_.assign(k, 0.0);
    right_.assign(k, 0.0);
    for (std::size_t i = 1; i < k; ++i) left_[i] = left_[i - 1] + cell[i - 1];
    for (std::size_t i = k - 1; i-- > 0;) right_[i] = right_[i + 1] + cell[i];
  }

  const std::vector<double>& cuts() const { return cuts_; }
  const std::vector<double>& left() const { return left_; }
  const std::vector<double>& right() const { return right_; }

  double mass(double a, double b) const {
    if (!(a < b)) return 0.0;
    detail::Kernel k = [](auto, auto u, auto, auto out) {
      for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] * u[i];
    };
    return detail::integrate_profile_on(u_, k, a, b, rule_).value;
  }

  // Quantile at the standard normal level z: the x with F(x) = Phi(z), matched on the
  // survival side when z > 0.
  double quantile(double z, double tol) const {
    const bool upper = z > 0.0;
    const double target = upper ? quad::normal_sf(z) : quad::normal_cdf(z);
    const std::size_t k = cuts_.size();
    std::size_t i;
    if (!upper) {
      if (target <= left_.front()) return cuts_.front();
      if (target >= left_.back()) return cuts_.back();
      i = std::size_t(std::upper_bound(left_.begin(), left_.end(), target) - left_.begin()) - 1;
    } else {
      if (target <= right_.back()) return cuts_.back();
      if (target >= right_.front()) return cuts_.front();
      // right_ is non-increasing; find the last index with right_[i] >= target.
      std::size_t lo = 0, hi = k - 1;
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (right_[mid] >= target ? lo : hi) = mid;
      }
      i = lo;
    }
    i = std::min(i, k - 2);
    double a = cuts_[i], b = cuts_[i + 1];
    const double base = upper ? right_[i + 1] : left_[i];
    while (b - a > tol) {
      const double m = 0.5 * (a + b);
      const double f = upper ? base + mass(m, cuts_[i + 1]) : base + mass(cuts_[i], m);
      const bool go_right = upper ? f > target : f < target;
      (go_right ? a : b) = m;
    }
    return 0.5 * (a + b);
  }

 private:
  const Profile& u_;
  quad::QuadratureRule rule_;
  std::vector<double> cuts_, left_, right_;
};

}  // namespace

double w2_distance_1d(const ProbeFunction& probe, const W2Options& o) {
  if (probe.dimension() != 1 || probe.mode() != Mode::gaussian)
    throw std::invalid_argument("w2_distance_1d: one-dimensional gaussian probe required");
  const Profile u = detail::fold_half_gaussian(probe.factors()[0]);
  quad::QuadratureRule inner = o.rule;
  inner.tolerance = std::min(o.rule.tolerance, 1e-14);
  const Distribution dist(u, inner);
  const double total = dist.left().back();
  if (std::abs(total - 1.0) > 1e-8)
    throw std::invalid_argument("w2_distance_1d: probe must have unit norm");

  std::vector<double> zcuts{-o.z_limit};
  const auto& cuts = dist.cuts();
  for (std::size_t i = 1; i + 1 < cuts.size(); ++i) {
    const double z = dist.left()[i] < 0.5 ? quad::normal_quantile(dist.left()[i])
                                          : -quad::normal_quantile(dist.right()[i]);
    if (std::isfinite(z) && z > zcuts.back() && z < o.z_limit) zcuts.push_back(z);
  }
  zcuts.push_back(o.z_limit);

  quad::BatchFunction f = [&](std::span<const double> z, std::span<double> y) {
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double q = dist.quantile(z[i], o.bisection_tolerance);
      y[i] = (q - z[i]) * (q - z[i]) * quad::normal_pdf(z[i]);
    }
  };
  const auto r = quad::integrate_panels(f, zcuts, o.rule, 0.5);
  return std::sqrt(std::max(0.0, r.value));
}

}  // namespace lsi
