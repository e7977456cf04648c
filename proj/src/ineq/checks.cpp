#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lsi/detail/factor_integral.hpp"
#include "lsi/errors.hpp"
#include "lsi/ineq.hpp"

namespace lsi::ineq {

namespace {

const double kL2Pi = std::log(2.0 * std::numbers::pi);

// Normalised quantities of a report with first-order error propagation.
struct Normalized {
  double n, i, e, m, s_raw;
  double n_err, i_err, e_err, m_err;
  explicit Normalized(const FunctionalReport& r) {
    n = r.l2_norm_sq.value;
    i = r.fisher.value / n;
    e = r.entropy.value / n;
    m = r.second_moment.value / n;
    s_raw = r.raw_entropy.value;
    n_err = r.l2_norm_sq.error;
    const double rel = n_err / n;
    i_err = r.fisher.error / n + std::abs(i) * rel;
    e_err = r.entropy.error / n + std::abs(e) * rel;
    m_err = r.second_moment.error / n + std::abs(m) * rel;
  }
};

BoundCheck start(const Evaluation& ev, std::string name) {
  BoundCheck c;
  c.name = std::move(name);
  c.probe = ev.probe().label();
  return c;
}

BoundCheck skip(BoundCheck c, std::string why) {
  c.status = CheckStatus::skipped;
  c.note = std::move(why);
  c.lhs = c.rhs = c.margin = std::nan("");
  return c;
}

BoundCheck finish(BoundCheck c, double lhs, double rhs, double err, const BoundParams& p) {
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = lhs - rhs;
  c.tolerance = p.tolerance_floor + p.error_factor * err;
  c.status = std::isfinite(c.margin) && c.margin >= -c.tolerance ? CheckStatus::passed
                                                                  : CheckStatus::failed;
  return c;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

// Returns a reason to skip when the report is missing or any named field diverges.
std::optional<std::string> unusable(const Evaluation& ev, Mode mode,
                                    std::initializer_list<const Estimate FunctionalReport::*> fields) {
  if (!ev.admits(mode))
    return std::string("probe not representable in ") + std::string(mode_name(mode)) + " mode";
  const FunctionalReport& r = mode == Mode::gaussian ? ev.gaussian() : ev.euclidean();
  for (auto f : fields)
    if ((r.*f).divergent) return "divergent: " + join(r.divergent_fields());
  return std::nullopt;
}

void add_inputs(BoundCheck& c, const FunctionalReport& r) {
  const Normalized q(r);
  c.inputs = {{"d", double(r.dimension)}, {"l2_norm_sq", q.n}, {"fisher", r.fisher.value},
              {"entropy", r.entropy.value}, {"second_moment", r.second_moment.value},
              {"quad_error", r.max_error()}};
}

// int v d gamma, or nullopt for radial probes.
std::optional<Estimate> mean_value(const ProbeFunction& v) {
  if (v.structure() == Structure::radial) return std::nullopt;
  Estimate total{1.0, 0.0, true, false};
  for (const auto& f : v.factors()) {
    const Profile u = detail::fold_half_gaussian(f);
    detail::Kernel k = [](auto x, auto uu, auto, auto out) {
      for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = uu[i] * std::exp(-0.25 * kL2Pi - 0.25 * x[i] * x[i]);
    };
    const auto r = detail::integrate_profile(u, k, detail::Envelope{1.0, 0.0, -0.25},
                                             quad::QuadratureRule::adaptive(1e-13));
    total.error = total.error * std::abs(r.value) + std::abs(total.value) * r.error_estimate;
    total.value *= r.value;
  }
  return total;
}

}  // namespace

Evaluation::Evaluation(ProbeFunction probe, ReportOptions opts)
    : probe_(std::move(probe)), opts_(std::move(opts)) {}

bool Evaluation::admits(Mode m) const {
  auto& ok = m == Mode::gaussian ? gauss_ok_ : euclid_ok_;
  if (!ok) {
    try {
      (void)to_mode(probe_, m);
      ok = true;
    } catch (const std::invalid_argument&) {
      ok = false;
    }
  }
  return *ok;
}

const FunctionalReport& Evaluation::gaussian() const {
  if (!gauss_) {
    if (!admits(Mode::gaussian)) throw TailViolation("probe is not admissible in gaussian mode");
    gauss_ = report(probe_, Mode::gaussian, opts_);
  }
  return *gauss_;
}

const FunctionalReport& Evaluation::euclidean() const {
  if (!euclid_) {
    if (!admits(Mode::euclidean)) throw TailViolation("probe is not admissible in euclidean mode");
    euclid_ = report(probe_, Mode::euclidean, opts_);
  }
  return *euclid_;
}

BoundCheck check_lsi(const Evaluation& ev, LsiForm form, const BoundParams& p) {
  BoundCheck c = start(ev, "lsi_" + std::string(form_name(form)));
  const Mode mode = form == LsiForm::g ? Mode::gaussian : Mode::euclidean;
  using R = FunctionalReport;
  if (auto why = unusable(ev, mode, {&R::l2_norm_sq, &R::fisher, &R::entropy})) return skip(c, *why);
  const FunctionalReport& r = mode == Mode::gaussian ? ev.gaussian() : ev.euclidean();
  add_inputs(c, r);
  const int d = r.dimension;
  const double n = r.l2_norm_sq.value, f = r.fisher.value, s = r.entropy.value;
  const double ferr = r.fisher.error, serr = r.entropy.error, nerr = r.l2_norm_sq.error;
  switch (form) {
    case LsiForm::g:
      return finish(c, f, 0.5 * s, ferr + 0.5 * serr, p);
    case LsiForm::e: {
      const double k = 0.25 * d * (kL2Pi + 2.0);
      return finish(c, f, 0.5 * s + k * n, ferr + 0.5 * serr + k * nerr, p);
    }
    case LsiForm::e_lambda: {
      const double l = p.lambda;
      const double k = 0.25 * d / l * (kL2Pi + 2.0 + std::log(l));
      c.inputs.emplace_back("lambda", l);
      return finish(c, f, 0.5 * s / l + k * n, ferr + 0.5 * serr / l + std::abs(k) * nerr, p);
    }
    case LsiForm::s: {
      const double rhs = 0.5 * std::numbers::pi * d * std::numbers::e * n * std::exp(2.0 * s / (d * n));
      const double err = ferr + rhs * (nerr / n + 2.0 / d * (serr / n + std::abs(s) * nerr / (n * n)));
      return finish(c, f, rhs, err, p);
    }
  }
  return c;
}

BoundCheck check_improved_gaussian(const Evaluation& ev, const BoundParams& p) {
  BoundCheck c = start(ev, "improved_gaussian");
  using R = FunctionalReport;
  if (auto why = unusable(ev, Mode::gaussian, {&R::l2_norm_sq, &R::fisher, &R::entropy}))
    return skip(c, *why);
  const FunctionalReport& r = ev.gaussian();
  add_inputs(c, r);
  const Normalized q(r);
  const double lhs = q.i - 0.5 * q.e;
  if (r.second_moment.divergent) {
    c.note = "second moment diverges; right side is 0";
    return finish(c, lhs, 0.0, q.i_err + 0.5 * q.e_err, p);
  }
  const int d = r.dimension;
  const double t = q.e + 0.5 * d - 0.5 * q.m;
  c.inputs.emplace_back("t", t);
  const double rhs = phi(t, d);
  const double slope = std::abs(0.5 * std::expm1(2.0 * t / d));
  return finish(c, lhs, rhs, q.i_err + 0.5 * q.e_err + slope * (q.e_err + 0.5 * q.m_err), p);
}

namespace {

// Shared precondition of the bounds requiring int |x|^2 |v|^2 d gamma <= d.
std::optional<BoundCheck> moment_gate(const Evaluation& ev, BoundCheck& c) {
  using R = FunctionalReport;
  if (auto why = unusable(ev, Mode::gaussian, {&R::l2_norm_sq, &R::fisher, &R::entropy, &R::second_moment}))
    return skip(c, *why);
  const FunctionalReport& r = ev.gaussian();
  add_inputs(c, r);
  const Normalized q(r);
  if (q.m > r.dimension + 1e-9 + q.m_err) {
    std::ostringstream os;
    os.precision(12);
    os << "second moment " << q.m << " exceeds d";
    return skip(c, os.str());
  }
  return std::nullopt;
}

}  // namespace

BoundCheck check_stab0(const Evaluation& ev, const BoundParams& p) {
  BoundCheck c = start(ev, "stab0");
  if (auto s = moment_gate(ev, c)) return *s;
  const FunctionalReport& r = ev.gaussian();
  const Normalized q(r);
  const int d = r.dimension;
  const double dm = std::max(0.0, d - q.m);
  const double rhs = q.e * q.e / (2.0 * d) + dm * dm / (8.0 * d);
  const double err = q.i_err + 0.5 * q.e_err + std::abs(q.e) / d * q.e_err + dm / (4.0 * d) * q.m_err;
  return finish(c, q.i - 0.5 * q.e, rhs, err, p);
}

BoundCheck check_cor_stab(const Evaluation& ev, const BoundParams& p) {
  BoundCheck c = start(ev, "cor_stab");
  if (auto s = moment_gate(ev, c)) return *s;
  const Normalized q(ev.gaussian());
  const int d = ev.gaussian().dimension;
  const double h = 1e-6 * std::max(1.0, q.i);
  const double slope = std::abs(cor_stab_rhs(q.i + h, d) - cor_stab_rhs(q.i, d)) / h;
  return finish(c, q.i - 0.5 * q.e, cor_stab_rhs(q.i, d), q.i_err * (1.0 + slope) + 0.5 * q.e_err, p);
}

BoundCheck check_stab0_inverted(const Evaluation& ev, const BoundParams& p) {
  BoundCheck c = start(ev, "stab0_inverted");
  if (auto s = moment_gate(ev, c)) return *s;
  const Normalized q(ev.gaussian());
  const int d = ev.gaussian().dimension;
  const double slope = 8.0 * q.i / d;
  return finish(c, q.i - 0.5 * q.e, stab0_inverted_rhs(q.i, d), q.i_err * (1.0 + slope) + 0.5 * q.e_err, p);
}

BoundCheck check_psi(const Evaluation& ev, const BoundParams& p) {
  BoundCheck c = start(ev, "psi");
  if (auto s = moment_gate(ev, c)) return *s;
  const Normalized q(ev.gaussian());
  const int d = ev.gaussian().dimension;
  const double slope = 1.0 - 1.0 / (1.0 + 4.0 * q.i / d);
  return finish(c, q.i - 0.5 * q.e, psi(std::max(0.0, q.i), d), q.i_err * (1.0 + slope) + 0.5 * q.e_err, p);
}

BoundCheck check_stabE(const Evaluation& ev, const BoundParams& p) {
  BoundCheck c = start(ev, "stabE");
  using R = FunctionalReport;
  if (auto why = unusable(ev, Mode::euclidean, {&R::l2_norm_sq, &R::fisher, &R::entropy, &R::second_moment}))
    return skip(c, *why);
  const FunctionalReport& r = ev.euclidean();
  add_inputs(c, r);
  const Normalized q(r);
  const int d = r.dimension;
  const double mu = q.m / d;
  c.inputs.emplace_back("mu", mu);
  const double lhs = mu * q.i - 0.5 * q.e - 0.25 * d * (kL2Pi + 2.0 + std::log(mu));
  const double t = q.e + 0.5 * d * (kL2Pi + 1.0 + std::log(mu));
  const double rhs = phi(t, d);
  const double slope = std::abs(0.5 * std::expm1(2.0 * t / d));
  const double err = mu * q.i_err + (q.i + 0.25 * d / mu) * q.m_err / d + 0.5 * q.e_err +
                     slope * (q.e_err + 0.5 * d * q.m_err / q.m);
  return finish(c, lhs, rhs, err, p);
}

BoundCheck check_prop1(const Evaluation& ev, const BoundParams& p) {
  BoundCheck c = start(ev, "prop1");
  using R = FunctionalReport;
  if (auto why = unusable(ev, Mode::euclidean, {&R::l2_norm_sq, &R::fisher, &R::raw_entropy}))
    return skip(c, *why);
  const FunctionalReport& r = ev.euclidean();
  const int d = r.dimension;
  if (!(p.p > 2.0) || (d >= 3 && p.p > 2.0 * d / (d - 2.0) + 1e-12))
    return skip(c, "exponent outside the admissible range");
  const auto cg = p.c_gns ? p.c_gns : gns_constant(d, p.p);
  if (!cg) return skip(c, "no Gagliardo-Nirenberg-Sobolev constant for this (d, p)");
  const double lambda = std::exp(-r.raw_entropy.value / (d * r.l2_norm_sq.value));
  const ProbeFunction scaled = dilate(to_mode(ev.probe(), Mode::euclidean), lambda);
  const FunctionalReport rs = report(scaled, Mode::euclidean, ev.options());
  add_inputs(c, rs);
  c.inputs.emplace_back("lambda", lambda);
  c.inputs.emplace_back("p", p.p);
  c.inputs.emplace_back("c_gns", *cg);
  c.inputs.emplace_back("raw_entropy_rescaled", rs.raw_entropy.value);
  if (std::abs(rs.raw_entropy.value) > 1e-8 + 10.0 * rs.raw_entropy.error)
    throw NumericalError("check_prop1: rescaled raw entropy is not zero");
  const double th = theta(d, p.p);
  const double g = std::pow(rs.fisher.value, 0.5 * th) * std::pow(rs.l2_norm_sq.value, 0.5 * (1.0 - th));
  const double rhs = prop1_bound(g, p.p, *cg);
  const double err = rs.abs_entropy.error + rhs * p.p * 0.5 * th * rs.fisher.error / rs.fisher.value;
  return finish(c, rhs, rs.abs_entropy.value, err, p);
}

BoundCheck check_prop2(const Evaluation& ev, const BoundParams& p) {
  BoundCheck c = start(ev, "prop2");
  using R = FunctionalReport;
  if (auto why = unusable(ev, Mode::euclidean, {&R::l2_norm_sq, &R::raw_entropy, &R::abs_entropy, &R::second_moment}))
    return skip(c, *why);
  const FunctionalReport& r = ev.euclidean();
  add_inputs(c, r);
  const int d = r.dimension;
  const double rhs = r.raw_entropy.value + r.second_moment.value + d * kL2Pi * r.l2_norm_sq.value +
                     2.0 / std::numbers::e;
  const double err = r.raw_entropy.error + r.second_moment.error + d * kL2Pi * r.l2_norm_sq.error +
                     r.abs_entropy.error;
  return finish(c, rhs, r.abs_entropy.value, err, p);
}

BoundCheck check_cor24(const Evaluation& ev, const BoundParams& p) {
  BoundCheck c = start(ev, "cor24");
  using R = FunctionalReport;
  if (auto why = unusable(ev, Mode::gaussian, {&R::l2_norm_sq, &R::fisher, &R::abs_entropy}))
    return skip(c, *why);
  const FunctionalReport& r = ev.gaussian();
  add_inputs(c, r);
  const int d = r.dimension;
  const double n = r.l2_norm_sq.value;
  const double rhs = 2.0 / std::numbers::e + 6.0 * r.fisher.value + d * (kL2Pi + 2.0) * n + n * std::log(n);
  const double err = 6.0 * r.fisher.error + (d * (kL2Pi + 2.0) + std::abs(std::log(n)) + 1.0) * r.l2_norm_sq.error +
                     r.abs_entropy.error;
  return finish(c, rhs, r.abs_entropy.value, err, p);
}

BoundCheck check_beckner(const Evaluation& ev, const BoundParams& p) {
  std::ostringstream name;
  name << "beckner_p" << p.p;
  BoundCheck c = start(ev, name.str());
  if (!(p.p >= 1.0 && p.p < 2.0)) return skip(c, "exponent outside [1, 2)");
  using R = FunctionalReport;
  if (auto why = unusable(ev, Mode::gaussian, {&R::l2_norm_sq, &R::fisher})) return skip(c, *why);
  const FunctionalReport& r = ev.gaussian();
  add_inputs(c, r);
  const ProbeFunction v = to_mode(ev.probe(), Mode::gaussian);
  const Estimate lp = lp_integral(v, p.p);
  const double norm_p2 = std::pow(lp.value, 2.0 / p.p);
  c.inputs.emplace_back("p", p.p);
  c.inputs.emplace_back("lp_norm_sq", norm_p2);
  const double rhs = (r.l2_norm_sq.value - norm_p2) / (2.0 - p.p);
  const double err = r.fisher.error +
                     (r.l2_norm_sq.error + 2.0 / p.p * norm_p2 / lp.value * lp.error) / (2.0 - p.p);
  return finish(c, r.fisher.value, rhs, err, p);
}

BoundCheck check_ckp(const Evaluation& ev, const BoundParams& p) {
  BoundCheck c = start(ev, "ckp");
  using R = FunctionalReport;
  if (auto why = unusable(ev, Mode::gaussian, {&R::l2_norm_sq, &R::entropy})) return skip(c, *why);
  const FunctionalReport& r = ev.gaussian();
  add_inputs(c, r);
  if (!r.l1_deviation) return skip(c, "L1 deviation available for one-dimensional product probes only");
  if (!r.nonnegative) return skip(c, "probe takes negative values");
  if (std::abs(r.l2_norm_sq.value - 1.0) > 1e-8) return skip(c, "probe is not normalised");
  const double l1 = r.l1_deviation->value;
  c.inputs.emplace_back("l1_deviation", l1);
  return finish(c, r.entropy.value, ckp_lower_bound(r), r.entropy.error + 0.5 * l1 * r.l1_deviation->error, p);
}

BoundCheck check_moment(const Evaluation& ev, const BoundParams& p) {
  BoundCheck c = start(ev, "moment");
  using R = FunctionalReport;
  if (auto why = unusable(ev, Mode::gaussian, {&R::fisher, &R::second_moment})) return skip(c, *why);
  const FunctionalReport& r = ev.gaussian();
  add_inputs(c, r);
  const auto mean = mean_value(to_mode(ev.probe(), Mode::gaussian));
  if (!mean) return skip(c, "mean not available for radial probes");
  c.inputs.emplace_back("mean", mean->value);
  if (std::abs(mean->value) > 1e-9 + 10.0 * mean->error) return skip(c, "probe has nonzero mean");
  const int d = r.dimension;
  return finish(c, 2.0 * (d + 1) * r.fisher.value, r.second_moment.value,
                2.0 * (d + 1) * r.fisher.error + r.second_moment.error, p);
}

BoundCheck check_lsi(const ProbeFunction& probe, LsiForm form, const BoundParams& p) {
  return check_lsi(Evaluation(probe, p.report), form, p);
}
BoundCheck check_improved_gaussian(const ProbeFunction& probe, const BoundParams& p) {
  return check_improved_gaussian(Evaluation(probe, p.report), p);
}
BoundCheck check_stab0(const ProbeFunction& probe, const BoundParams& p) {
  return check_stab0(Evaluation(probe, p.report), p);
}
BoundCheck check_stabE(const ProbeFunction& probe, const BoundParams& p) {
  return check_stabE(Evaluation(probe, p.report), p);
}
BoundCheck check_prop1(const ProbeFunction& probe, double pp, std::optional<double> c_gns) {
  BoundParams p;
  p.p = pp;
  p.c_gns = c_gns;
  return check_prop1(Evaluation(probe, p.report), p);
}
BoundCheck check_prop2(const ProbeFunction& probe, const BoundParams& p) {
  return check_prop2(Evaluation(probe, p.report), p);
}
BoundCheck check_cor24(const ProbeFunction& probe, const BoundParams& p) {
  return check_cor24(Evaluation(probe, p.report), p);
}
BoundCheck check_beckner(const ProbeFunction& probe, double pp) {
  BoundParams p;
  p.p = pp;
  return check_beckner(Evaluation(probe, p.report), p);
}

}  // namespace lsi::ineq
