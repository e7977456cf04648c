// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any line fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <set>
#include <string>
#include <vector>

#include "lsi/flows.hpp"
#include "lsi/functionals.hpp"
#include "lsi/ineq.hpp"
#include "lsi/manifold.hpp"

using namespace lsi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

nlohmann::json golden() {
  std::ifstream in(std::string(LSI_TEST_DATA_DIR) + "/prop42_floors.json");
  if (!in) throw std::runtime_error("cannot open golden file");
  return nlohmann::json::parse(in);
}

const int kSweep[] = {10, 20, 40, 80};

// 1. deficit of v_b and the scale-invariant form on sqrt(gamma) vanish to 1e-8; < 1 s.
Outcome optimizer_equality() {
  Outcome o;
  for (double b : {0.0, 0.5, 1.0}) {
    const double bb[] = {b};
    const double d = report(make_gaussian_optimizer(bb)).deficit.value;
    o.require(std::abs(d) <= 1e-8, "delta[v_" + num(b) + "] = " + num(d));
  }
  const double b0[] = {0.0};
  const auto c = ineq::check_lsi(make_euclid_gaussian(1.0, b0), ineq::LsiForm::s);
  o.require(std::abs(c.margin) <= 1e-8, "scale-invariant margin on sqrt(gamma) = " + num(c.margin));
  return o;
}

// 2. every non-skipped row passes with margin >= -(1e-7 + 10 err); >= 20 probes x >= 12 checks; < 30 s.
Outcome battery_soundness() {
  Outcome o;
  const auto probes = ineq::standard_battery();
  const auto rows = ineq::run_battery(probes);
  std::set<std::string> names;
  for (const auto& r : rows) names.insert(r.name);
  o.require(probes.size() >= 20, "only " + std::to_string(probes.size()) + " probes");
  o.require(names.size() >= 12, "only " + std::to_string(names.size()) + " checks");
  int skipped = 0;
  for (const auto& r : rows) {
    if (r.skipped()) {
      ++skipped;
      continue;
    }
    o.require(r.passed(), r.name + " on " + r.probe + " margin " + num(r.margin));
  }
  if (o.pass)
    o.detail = std::to_string(rows.size()) + " rows, " + std::to_string(skipped) + " skipped";
  return o;
}

// 3. prop42 with a = 1 over n in {10, 20, 40, 80}; < 60 s.
Outcome prop42_reproduction() {
  Outcome o;
  std::vector<double> delta;
  double m2_80 = 0.0, h1_80 = 0.0, worst_exact = 0.0;
  for (int n : kSweep) {
    const ProbeFunction v = make_prop42(1.0, n);
    ReportOptions opts;
    opts.use_gauss_hermite = false;
    const auto r = report(v, Mode::gaussian, opts);
    delta.push_back(r.deficit.value);
    worst_exact = std::max({worst_exact, std::abs(r.l2_norm_sq.value - *v.exact().l2_norm_sq),
                            std::abs(r.second_moment.value - *v.exact().second_moment)});
    if (n == 80) {
      m2_80 = r.second_moment.value;
      h1_80 = manifold::h1_seminorm_distance_to_manifold(v).distance_sq;
    }
  }
  for (std::size_t i = 1; i < delta.size(); ++i) o.require(delta[i] < delta[i - 1], "(i) delta not decreasing");
  o.require(delta.back() < 0.01, "(i) delta(80) = " + num(delta.back()));
  o.require(std::abs(m2_80 - 2.0) <= 0.02, "(ii) M2(80) = " + num(m2_80));
  o.require(h1_80 >= 0.24, "(iii) H1 distance^2 at n=80 = " + num(h1_80) + " < 0.24");
  o.require(worst_exact <= 1e-9, "(iv) closed-form mismatch " + num(worst_exact));
  return o;
}

// 4. example1 entropy shift within 1e-6, norms within 1e-10.
Outcome example1_exactness() {
  Outcome o;
  const ProbeFunction bump = make_default_bump();
  const auto base = report(bump, Mode::euclidean);
  for (int n : {2, 4, 8}) {
    const auto r = report(make_example1(bump, n), Mode::euclidean);
    const double shift = r.entropy.value - base.entropy.value + base.l2_norm_sq.value * std::log(n);
    o.require(std::abs(shift) <= 1e-6, "n=" + std::to_string(n) + " entropy shift error " + num(shift));
    o.require(std::abs(r.l2_norm_sq.value - base.l2_norm_sq.value) <= 1e-10, "n=" + std::to_string(n) + " norm");
  }
  return o;
}

// 5. least-squares slope of log delta against log eps is 4 +- 0.1.
Outcome tangent_order() {
  Outcome o;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double eps[] = {0.02, 0.04, 0.06, 0.08, 0.1};
  for (double e : eps) {
    const double x = std::log(e), y = std::log(report(make_tangent(e, 1)).deficit.value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (5 * sxy - sx * sy) / (5 * sxx - sx * sx);
  o.require(std::abs(slope - 4.0) <= 0.1, "slope " + num(slope));
  if (o.pass) o.detail = "slope " + num(slope);
  return o;
}

// 6. two-bump OU: entropy identity 1e-4 at 10 interior times, int_0^8 R <= delta, mixture vs Hermite 1e-5; < 60 s.
Outcome flow_identities() {
  Outcome o;
  const auto m = flows::two_bump();
  const auto times = flows::interior_times(2.0, 10);
  for (const auto& r : flows::entropy_identity(m, times, 1e-3, 1e-4))
    o.require(r.relative_error <= 1e-4, "entropy identity at t=" + num(r.t) + " rel " + num(r.relative_error));
  const auto d = flows::deficit_via_flow(m, 8.0);
  o.require(d.lhs - d.rhs >= 0.0 || std::abs(d.lhs - d.rhs) <= d.tolerance,
            "delta " + num(d.lhs) + " < int R " + num(d.rhs));
  const auto a = flows::trace_functionals(m, times);
  const auto b = flows::trace_functionals(flows::hermite_projection(m, 64), times);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& x = a.samples[i];
    const auto& y = b.samples[i];
    worst = std::max({worst, std::abs(x.entropy - y.entropy) / std::abs(x.entropy),
                      std::abs(x.fisher - y.fisher) / std::abs(x.fisher),
                      std::abs(x.remainder - y.remainder) / std::abs(x.remainder)});
  }
  o.require(worst <= 1e-5, "mixture vs Hermite relative gap " + num(worst));
  if (o.pass) o.detail = "delta - int R = " + num(d.lhs - d.rhs) + ", trace gap " + num(worst);
  return o;
}

// 7. heat monitor non-increasing per step (1e-9); constant for a single Gaussian (1e-9).
Outcome entropy_power() {
  Outcome o;
  std::vector<double> t;
  for (int i = 0; i <= 40; ++i) t.push_back(0.05 * i);
  const std::vector<flows::GaussianMixture> mixtures = {
      flows::two_bump(2.0, 0.5, flows::Reference::lebesgue),
      flows::GaussianMixture({{0.3, -1.0, 0.4}, {0.7, 1.5, 1.5}}, flows::Reference::lebesgue),
      flows::GaussianMixture({{0.2, -3.0, 0.2}, {0.5, 0.0, 0.3}, {0.3, 2.5, 0.6}}, flows::Reference::lebesgue)};
  for (const auto& m : mixtures) {
    const auto g = flows::heat_renyi_monitor(m, t);
    for (std::size_t i = 1; i < g.size(); ++i)
      o.require(g[i] <= g[i - 1] + 1e-9, "G increases at t=" + num(t[i]));
  }
  const auto g = flows::heat_renyi_monitor(flows::GaussianMixture({{1.0, 0.4, 0.7}}, flows::Reference::lebesgue), t);
  const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
  o.require(*hi - *lo <= 1e-9, "single Gaussian spread " + num(*hi - *lo));
  return o;
}

// 8. improved bounds pass on their admissible rows; phi(0) = psi(0) = 0; cor_stab_rhs(1, 1) = 8/27.
Outcome improved_bounds() {
  Outcome o;
  const std::set<std::string> names = {"improved_gaussian", "stab0", "cor_stab", "stabE",
                                       "prop2", "cor24", "beckner_p1.5", "beckner_p1"};
  int seen = 0;
  for (const auto& r : ineq::run_battery(ineq::standard_battery())) {
    if (!names.count(r.name) || r.skipped()) continue;
    ++seen;
    o.require(r.passed(), r.name + " on " + r.probe + " margin " + num(r.margin));
  }
  o.require(seen > 0, "no admissible rows");
  o.require(ineq::phi(0.0, 1) == 0.0 && ineq::psi(0.0, 1) == 0.0, "phi(0) or psi(0) nonzero");
  o.require(std::abs(ineq::cor_stab_rhs(1.0, 1) - 8.0 / 27.0) <= 1e-12, "cor_stab_rhs(1,1)");
  if (o.pass) o.detail = std::to_string(seen) + " admissible rows";
  return o;
}

// 9. along the sweep delta -> 0 while L2, H1 and W2 distances stay above strictly positive golden floors.
Outcome instability_witnesses() {
  Outcome o;
  const auto j = golden();
  const double f_l2 = j["floors"]["l2_distance_sq"], f_h1 = j["floors"]["h1_distance_sq"], f_w2 = j["floors"]["w2_sq"];
  o.require(f_l2 > 0.0, "L2 floor is " + num(f_l2) + ", not strictly positive");
  o.require(f_h1 > 0.0, "H1 floor is not strictly positive");
  o.require(f_w2 > 0.0, "W2 floor is not strictly positive");
  std::vector<double> delta;
  double min_l2 = INFINITY, min_h1 = INFINITY, min_w2 = INFINITY;
  for (int n : kSweep) {
    const ProbeFunction v = make_prop42(1.0, n);
    delta.push_back(report(v).deficit.value);
    min_l2 = std::min(min_l2, manifold::l2_distance_to_manifold(v).distance_sq);
    min_h1 = std::min(min_h1, manifold::h1_seminorm_distance_to_manifold(v).distance_sq);
    const double w = w2_distance_1d(v);
    min_w2 = std::min(min_w2, w * w);
  }
  for (std::size_t i = 1; i < delta.size(); ++i) o.require(delta[i] < delta[i - 1], "delta not decreasing");
  o.require(delta.back() < 0.1 * delta.front(), "delta does not tend to 0");
  o.require(min_l2 >= f_l2, "L2 distance^2 " + num(min_l2) + " below floor");
  o.require(min_h1 >= f_h1, "H1 distance^2 " + num(min_h1) + " below floor");
  o.require(min_w2 >= f_w2, "W2^2 " + num(min_w2) + " below floor");
  if (o.pass) o.detail = "min L2 " + num(min_l2) + ", H1 " + num(min_h1) + ", W2 " + num(min_w2);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0: no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all = {
      {1, "optimizer-equality", 1.0, optimizer_equality},
      {2, "battery-soundness", 30.0, battery_soundness},
      {3, "prop42-reproduction", 60.0, prop42_reproduction},
      {4, "example1-exactness", 0.0, example1_exactness},
      {5, "tangent-order", 0.0, tangent_order},
      {6, "flow-identities", 60.0, flow_identities},
      {7, "entropy-power-monotonicity", 0.0, entropy_power},
      {8, "improved-bounds", 0.0, improved_bounds},
      {9, "instability-witnesses", 0.0, instability_witnesses},
  };
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) o.require(false, "runtime " + num(secs) + " s over " + num(c.budget_s) + " s");
    failed += !o.pass;
    std::printf("%s %d %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.empty() ? "" : ": ",
                o.detail.c_str());
  }
  std::fflush(stdout);
  return failed ? 1 : 0;
}
