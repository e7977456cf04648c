#include <cmath>
#include <future>

#include "lsi/ineq.hpp"

namespace lsi::ineq {

std::vector<ProbeFunction> standard_battery() {
  std::vector<ProbeFunction> out;
  out.push_back(make_constant_one(1));
  out.push_back(make_constant_one(3));
  for (double b : {0.0, 0.5, 1.0}) {
    const double bb[] = {b};
    out.push_back(make_gaussian_optimizer(bb));
  }
  {
    const double bb[] = {0.5, -0.5};
    out.push_back(make_gaussian_optimizer(bb));
  }
  for (double e : {0.01, 0.1, 0.5}) out.push_back(make_tangent(e, 1));
  out.push_back(make_tangent(0.1, 2));
  const ProbeFunction bump = make_default_bump();
  for (int n : {1, 2, 4, 8}) out.push_back(make_example1(bump, n));
  for (double a : {1.0, 2.0})
    for (int n : {10, 20, 40}) out.push_back(make_prop42(a, n));
  for (double l : {1.0, 0.5, 2.0}) {
    const double b0[] = {0.0};
    out.push_back(make_euclid_gaussian(l, b0));
  }
  out.push_back(make_hermite(1, 1));
  out.push_back(make_hermite(2, 1));
  out.push_back(make_example2(1.5, 1));
  return out;
}

std::vector<BoundCheck> run_checks(const ProbeFunction& probe, const BoundParams& params) {
  const Evaluation ev(probe, params.report);
  const int d = probe.dimension();
  std::vector<BoundCheck> out;
  out.push_back(check_lsi(ev, LsiForm::g, params));
  out.push_back(check_lsi(ev, LsiForm::e, params));
  {
    BoundParams p = params;
    if (ev.admits(Mode::euclidean) && !ev.euclidean().second_moment.divergent)
      p.lambda = optimal_lambda(ev.euclidean());
    out.push_back(check_lsi(ev, LsiForm::e_lambda, p));
  }
  out.push_back(check_lsi(ev, LsiForm::s, params));
  out.push_back(check_improved_gaussian(ev, params));
  out.push_back(check_stab0(ev, params));
  out.push_back(check_cor_stab(ev, params));
  out.push_back(check_stab0_inverted(ev, params));
  out.push_back(check_psi(ev, params));
  out.push_back(check_stabE(ev, params));
  {
    BoundParams p = params;
    if (d >= 3) p.p = 2.0 * d / (d - 2.0);
    out.push_back(check_prop1(ev, p));
  }
  out.push_back(check_prop2(ev, params));
  out.push_back(check_cor24(ev, params));
  for (double pp : {1.5, 1.0}) {
    BoundParams p = params;
    p.p = pp;
    out.push_back(check_beckner(ev, p));
  }
  out.push_back(check_ckp(ev, params));
  out.push_back(check_moment(ev, params));
  return out;
}

std::vector<BoundCheck> run_battery(const std::vector<ProbeFunction>& probes,
                                    const BoundParams& params) {
  std::vector<std::future<std::vector<BoundCheck>>> jobs;
  jobs.reserve(probes.size());
  for (const auto& p : probes)
    jobs.push_back(std::async(std::launch::async, [&p, &params] { return run_checks(p, params); }));
  std::vector<BoundCheck> out;
  for (auto& j : jobs) {
    auto rows = j.get();
    out.insert(out.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
  }
  return out;
}

BatterySummary summarize(const std::vector<BoundCheck>& checks) {
  BatterySummary s;
  for (const auto& c : checks) {
    if (c.passed()) ++s.passed;
    else if (c.failed()) ++s.failed;
    else ++s.skipped;
  }
  return s;
}

}  // namespace lsi::ineq
