#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lsi/flows.hpp"
#include "lsi/simd.hpp"

namespace lsi::flows {

namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

std::vector<simd::MixtureTerm> terms_of(const std::vector<Component>& c) {
  std::vector<simd::MixtureTerm> t;
  t.reserve(c.size());
  for (const auto& k : c)
    t.push_back({std::log(k.weight) - kHalfLog2Pi - 0.5 * std::log(k.variance), k.mean, 1.0 / k.variance});
  return t;
}

}  // namespace

std::string_view reference_name(Reference r) {
  return r == Reference::gaussian ? "gaussian" : "lebesgue";
}

GaussianMixture::GaussianMixture(std::vector<Component> components, Reference ref)
    : components_(std::move(components)), ref_(ref) {
  if (components_.empty()) throw std::invalid_argument("GaussianMixture: no components");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0) || !std::isfinite(c.weight))
      throw std::invalid_argument("GaussianMixture: weights must be positive");
    if (!(c.variance > 0.0) || !std::isfinite(c.variance))
      throw std::invalid_argument("GaussianMixture: variances must be positive");
    if (!std::isfinite(c.mean)) throw std::invalid_argument("GaussianMixture: means must be finite");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("GaussianMixture: weights must sum to 1");
}

double GaussianMixture::density(double x) const {
  double s = 0.0;
  for (const auto& c : components_) {
    const double z = x - c.mean;
    s += c.weight * std::exp(-0.5 * z * z / c.variance - kHalfLog2Pi - 0.5 * std::log(c.variance));
  }
  return s;
}

void GaussianMixture::log_relative(std::span<const double> x, std::span<double> l, std::span<double> dl,
                                   std::span<double> d2l) const {
  const auto t = terms_of(components_);
  simd::mixture_log_density(t, x, l, dl, d2l);
  if (ref_ == Reference::gaussian) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      l[i] += 0.5 * x[i] * x[i] + kHalfLog2Pi;
      dl[i] += x[i];
      d2l[i] += 1.0;
    }
  }
}

std::vector<double> GaussianMixture::cuts() const {
  double lo = 0.0, hi = 0.0;
  std::vector<double> out;
  for (const auto& c : components_) {
    const double s = std::sqrt(c.variance);
    lo = std::min(lo, c.mean - 12.0 * s);
    hi = std::max(hi, c.mean + 12.0 * s);
    out.push_back(c.mean);
  }
  out.push_back(lo);
  out.push_back(hi);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<double> GaussianMixture::hermite_coefficients(int K) const {
  if (ref_ != Reference::gaussian)
    throw std::invalid_argument("hermite_coefficients: gaussian reference required");
  if (K < 0) throw std::invalid_argument("hermite_coefficients: K must be >= 0");
  std::vector<double> c(K + 1, 0.0);
  for (const auto& comp : components_) {
    // e_k = E[He_k(X)] / sqrt(k!) for X ~ N(m, s^2)
    double prev = 0.0, cur = 1.0;
    c[0] += comp.weight;
    for (int k = 0; k < K; ++k) {
      const double next = (comp.mean * cur + (comp.variance - 1.0) * std::sqrt(double(k)) * prev) /
                          std::sqrt(k + 1.0);
      prev = cur;
      cur = next;
      c[k + 1] += comp.weight * cur;
    }
  }
  return c;
}

GaussianMixture standard_gaussian(Reference ref) { return GaussianMixture({{1.0, 0.0, 1.0}}, ref); }

GaussianMixture two_bump(double mean, double variance, Reference ref) {
  return GaussianMixture({{0.5, -mean, variance}, {0.5, mean, variance}}, ref);
}

GaussianMixture ou_evolve(const GaussianMixture& m, double t) {
  if (m.reference() != Reference::gaussian)
    throw std::invalid_argument("ou_evolve: Ornstein-Uhlenbeck flow acts on gaussian-reference states");
  if (!(t >= 0.0)) throw std::invalid_argument("ou_evolve: t must be >= 0");
  const double e1 = std::exp(-t), e2 = std::exp(-2.0 * t);
  std::vector<Component> c = m.components();
  for (auto& k : c) {
    k.mean *= e1;
    k.variance = 1.0 + (k.variance - 1.0) * e2;
  }
  return GaussianMixture(std::move(c), Reference::gaussian);
}

GaussianMixture heat_evolve(const GaussianMixture& m, double t) {
  if (m.reference() != Reference::lebesgue)
    throw std::invalid_argument("heat_evolve: heat flow acts on Lebesgue-reference states");
  if (!(t >= 0.0)) throw std::invalid_argument("heat_evolve: t must be >= 0");
  std::vector<Component> c = m.components();
  for (auto& k : c) k.variance += 2.0 * t;
  return GaussianMixture(std::move(c), Reference::lebesgue);
}

}  // namespace lsi::flows
