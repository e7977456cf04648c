#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lsi/errors.hpp"
#include "lsi/probe.hpp"

namespace lsi {

std::string_view mode_name(Mode m) { return m == Mode::gaussian ? "gaussian" : "euclidean"; }

namespace {
constexpr std::pair<Family, std::string_view> kFamilies[] = {
    {Family::constant, "constant"},
    {Family::gaussian_optimizer, "optimizer"},
    {Family::tangent, "tangent"},
    {Family::example1, "example1"},
    {Family::example2, "example2"},
    {Family::prop42, "prop42"},
    {Family::euclid_gaussian, "euclid_gaussian"},
    {Family::hermite, "hermite"},
    {Family::custom, "custom"},
};
}  // namespace

std::string_view family_name(Family f) {
  for (const auto& [k, v] : kFamilies)
    if (k == f) return v;
  return "custom";
}

std::optional<Family> family_from_name(std::string_view name) {
  for (const auto& [k, v] : kFamilies)
    if (v == name) return k;
  return std::nullopt;
}

void ProbeSpec::validate() const {
  if (d < 1) throw std::invalid_argument("probe spec: dimension must be >= 1");
  switch (family) {
    case Family::gaussian_optimizer:
      if (!b.empty() && int(b.size()) != d)
        throw std::invalid_argument("probe spec: b must have d entries");
      for (double x : b)
        if (!std::isfinite(x)) throw std::invalid_argument("probe spec: b must be finite");
      break;
    case Family::tangent:
      if (!std::isfinite(eps)) throw std::invalid_argument("probe spec: eps must be finite");
      break;
    case Family::example1:
      if (n < 1) throw std::invalid_argument("probe spec: example1 needs n >= 1");
      if (d != 1) throw std::invalid_argument("probe spec: example1 is one-dimensional");
      break;
    case Family::example2:
      if (!(a_exp > 1.0 && a_exp < 2.0))
        throw std::invalid_argument("probe spec: example2 exponent must lie in (1,2)");
      break;
    case Family::prop42:
      if (!(a > 0.0)) throw std::invalid_argument("probe spec: prop42 needs a > 0");
      if (n < 2) throw std::invalid_argument("probe spec: prop42 needs n >= 2");
      if (d != 1) throw std::invalid_argument("probe spec: prop42 is one-dimensional");
      break;
    case Family::euclid_gaussian:
      if (!(lambda > 0.0)) throw std::invalid_argument("probe spec: lambda must be > 0");
      if (!b.empty() && int(b.size()) != d)
        throw std::invalid_argument("probe spec: b must have d entries");
      break;
    case Family::hermite:
      if (degree < 0) throw std::invalid_argument("probe spec: hermite degree must be >= 0");
      break;
    case Family::constant:
    case Family::custom:
      break;
  }
}

bool ExactTable::empty() const {
  return !l2_norm_sq && !fisher && !raw_entropy && !second_moment && first_moment.empty();
}

double sphere_area(int d) {
  if (d < 1) throw std::invalid_argument("sphere_area: d must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

ProbeFunction::ProbeFunction(Mode mode, int dim, Structure structure,
                             std::vector<Profile> factors, ProbeSpec spec, std::string label)
    : mode_(mode),
      dim_(dim),
      structure_(structure),
      factors_(std::move(factors)),
      spec_(std::move(spec)),
      label_(std::move(label)) {
  if (dim_ < 1) throw std::invalid_argument("ProbeFunction: dimension must be >= 1");
  if (structure_ == Structure::product) {
    if (int(factors_.size()) != dim_)
      throw std::invalid_argument("ProbeFunction: product probe needs one factor per coordinate");
    for (const auto& f : factors_)
      if (f.domain_lo() != -HUGE_VAL)
        throw std::invalid_argument("ProbeFunction: product factors live on the real line");
  } else {
    if (factors_.size() != 1 || factors_[0].domain_lo() != 0.0)
      throw std::invalid_argument("ProbeFunction: radial probe needs one half-line profile");
  }
  validate_tails();
  even_ = structure_ == Structure::radial;
}

void ProbeFunction::validate_tails() const {
  for (const auto& f : factors_) {
    for (bool right : {false, true}) {
      if (!right && f.domain_lo() == 0.0) continue;
      const TailDescriptor t = f.tail(right);
      if (t.kind == TailKind::vanishing) continue;
      if (t.kind == TailKind::algebraic) {
        if (structure_ != Structure::radial)
          throw TailViolation("algebraic tails are supported for radial probes only");
        if (mode_ == Mode::gaussian)
          throw TailViolation("algebraic tails have infinite second moment; Euclidean mode only");
        continue;
      }
      const double limit = mode_ == Mode::gaussian ? 0.25 : 0.0;
      const double lin = right ? t.q1 : -t.q1;
      if (t.q2 > limit || (t.q2 == limit && lin >= 0.0))
        throw TailViolation("probe tail grows too fast for " + std::string(mode_name(mode_)) +
                            " mode");
    }
  }
}

bool ProbeFunction::even() const { return even_; }

double ProbeFunction::value(std::span<const double> x) const {
  if (int(x.size()) != dim_) throw std::invalid_argument("ProbeFunction::value: wrong dimension");
  if (structure_ == Structure::radial) {
    double r2 = 0.0;
    for (double t : x) r2 += t * t;
    return factors_[0].value(std::sqrt(r2));
  }
  double v = 1.0;
  for (int j = 0; j < dim_; ++j) v *= factors_[j].value(x[j]);
  return v;
}

std::vector<double> ProbeFunction::gradient(std::span<const double> x) const {
  if (int(x.size()) != dim_)
    throw std::invalid_argument("ProbeFunction::gradient: wrong dimension");
  std::vector<double> g(dim_, 0.0);
  if (structure_ == Structure::radial) {
    double r2 = 0.0;
    for (double t : x) r2 += t * t;
    const double r = std::sqrt(r2);
    if (r == 0.0) return g;
    const double dr = factors_[0].derivative(r);
    for (int j = 0; j < dim_; ++j) g[j] = dr * x[j] / r;
    return g;
  }
  for (int j = 0; j < dim_; ++j) {
    double p = factors_[j].derivative(x[j]);
    for (int i = 0; i < dim_; ++i)
      if (i != j) p *= factors_[i].value(x[i]);
    g[j] = p;
  }
  return g;
}

double ProbeFunction::value1(double x) const {
  if (dim_ != 1) throw std::invalid_argument("value1: probe is not one-dimensional");
  return structure_ == Structure::radial ? factors_[0].value(std::abs(x)) : factors_[0].value(x);
}

double ProbeFunction::derivative1(double x) const {
  if (dim_ != 1) throw std::invalid_argument("derivative1: probe is not one-dimensional");
  if (structure_ == Structure::radial)
    return x >= 0 ? factors_[0].derivative(x) : -factors_[0].derivative(-x);
  return factors_[0].derivative(x);
}

std::vector<double> ProbeFunction::breakpoints() const {
  if (dim_ != 1) throw std::invalid_argument("breakpoints: probe is not one-dimensional");
  if (structure_ == Structure::product) return factors_[0].breakpoints();
  std::vector<double> out;
  for (double b : factors_[0].breakpoints()) out.push_back(-b);
  out.push_back(0.0);
  for (double b : factors_[0].breakpoints()) out.push_back(b);
  std::sort(out.begin(), out.end());
  return out;
}

ProbeFunction ProbeFunction::with_exact(ExactTable t) const {
  ProbeFunction p = *this;
  p.exact_ = std::move(t);
  return p;
}

ProbeFunction ProbeFunction::with_label(std::string label) const {
  ProbeFunction p = *this;
  p.label_ = std::move(label);
  return p;
}

ProbeFunction ProbeFunction::with_spec(ProbeSpec spec) const {
  ProbeFunction p = *this;
  p.spec_ = std::move(spec);
  return p;
}

ProbeFunction ProbeFunction::with_symmetry(bool even) const {
  ProbeFunction p = *this;
  p.even_ = even || structure_ == Structure::radial;
  return p;
}

}  // namespace lsi
