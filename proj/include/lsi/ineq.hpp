#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lsi/functionals.hpp"
#include "lsi/probe.hpp"

namespace lsi::ineq {

enum class CheckStatus { passed, failed, skipped };
std::string_view status_name(CheckStatus s);

// lhs is the side asserted to dominate: margin = lhs - rhs, passed iff margin >= -tolerance.
struct BoundCheck {
  std::string name;
  std::string probe;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::skipped;
  std::string note;
  std::vector<std::pair<std::string, double>> inputs;

  bool passed() const { return status == CheckStatus::passed; }
  bool failed() const { return status == CheckStatus::failed; }
  bool skipped() const { return status == CheckStatus::skipped; }
};

struct BoundParams {
  double lambda = 1.0;
  double p = 4.0;
  std::optional<double> c_gns;
  double c_p = 1.0;
  double t = 0.0;
  // tolerance = tolerance_floor + error_factor * propagated quadrature error
  double tolerance_floor = 1e-7;
  double error_factor = 10.0;
  ReportOptions report;
  void validate(int d) const;
};

double theta(int d, double p);

// (d/4) (exp(2t/d) - 1 - 2t/d)
double phi(double t, int d);
double phi_second(double t, int d);
// s - (d/4) log(1 + 4s/d)
double psi(double s, int d);
// 8 sqrt(d) i^2 / (d + 8 i)^{3/2}
double cor_stab_rhs(double i, int d);
// Exact lower bound on the deficit obtained by inverting e^2 + d e - 2 d i >= 0.
double stab0_inverted_rhs(double i, int d);
// C_P / (C_P + (1 - C_P) exp(-2t))
double poincare_evolution(double c_p, double t);
// (C_P^2 - C_P - C_P log C_P) / (1 - C_P)^2, equal to 1/2 at C_P = 1.
double fil_factor(double c_p);
// Literature value of the optimal Gagliardo-Nirenberg-Sobolev constant when known:
// d = 1 (any p > 2, closed form) and d >= 3 with p = 2d/(d-2) (Aubin-Talenti).
std::optional<double> gns_constant(int d, double p);

// Bound on int | |u|^2 log |u|^2 | for u with zero raw entropy, g = |grad u|^theta |u|^(1-theta):
// 4 (g / C)^p / ((p - 2) e), from sup_{t > 1} t log t / t^(p/2) = 2 / ((p - 2) e).
double prop1_bound(double g, double p, double c_gns);
// 2 (g / C)^p / ((p - 1) e); pairs |u|^2 log |u|^2 with |u|^(2p) instead of |u|^p and fails on sqrt(gamma).
double prop1_naive_bound(double g, double p, double c_gns);

// d / int |x|^2 |u|^2 (unit norm assumed)
double optimal_lambda(const FunctionalReport& euclidean);
double optimal_lambda(const ProbeFunction& u);
// The lambda that maximises the right side of the lambda-form for fixed u.
double entropy_optimal_lambda(const FunctionalReport& euclidean);

enum class LsiForm { g, e, e_lambda, s };
std::string_view form_name(LsiForm f);

// Lazily evaluated reports of one probe in both modes.
class Evaluation {
 public:
  explicit Evaluation(ProbeFunction probe, ReportOptions opts = {});
  const ProbeFunction& probe() const { return probe_; }
  const FunctionalReport& gaussian() const;
  const FunctionalReport& euclidean() const;
  // False when the probe cannot be represented in the mode.
  bool admits(Mode m) const;
  const ReportOptions& options() const { return opts_; }

 private:
  ProbeFunction probe_;
  ReportOptions opts_;
  mutable std::optional<FunctionalReport> gauss_, euclid_;
  mutable std::optional<bool> gauss_ok_, euclid_ok_;
};

BoundCheck check_lsi(const Evaluation& ev, LsiForm form, const BoundParams& p = {});
BoundCheck check_improved_gaussian(const Evaluation& ev, const BoundParams& p = {});
BoundCheck check_stab0(const Evaluation& ev, const BoundParams& p = {});
BoundCheck check_cor_stab(const Evaluation& ev, const BoundParams& p = {});
BoundCheck check_stab0_inverted(const Evaluation& ev, const BoundParams& p = {});
BoundCheck check_psi(const Evaluation& ev, const BoundParams& p = {});
BoundCheck check_stabE(const Evaluation& ev, const BoundParams& p = {});
// Uses p.p and p.c_gns (literature default when absent); rescales to zero raw entropy.
BoundCheck check_prop1(const Evaluation& ev, const BoundParams& p = {});
BoundCheck check_prop2(const Evaluation& ev, const BoundParams& p = {});
BoundCheck check_cor24(const Evaluation& ev, const BoundParams& p = {});
// Uses p.p in [1, 2).
BoundCheck check_beckner(const Evaluation& ev, const BoundParams& p = {});
BoundCheck check_ckp(const Evaluation& ev, const BoundParams& p = {});
BoundCheck check_moment(const Evaluation& ev, const BoundParams& p = {});

// Convenience overloads building a fresh evaluation.
BoundCheck check_lsi(const ProbeFunction& probe, LsiForm form, const BoundParams& p = {});
BoundCheck check_improved_gaussian(const ProbeFunction& probe, const BoundParams& p = {});
BoundCheck check_stab0(const ProbeFunction& probe, const BoundParams& p = {});
BoundCheck check_stabE(const ProbeFunction& probe, const BoundParams& p = {});
BoundCheck check_prop1(const ProbeFunction& probe, double p, std::optional<double> c_gns = {});
BoundCheck check_prop2(const ProbeFunction& probe, const BoundParams& p = {});
BoundCheck check_cor24(const ProbeFunction& probe, const BoundParams& p = {});
BoundCheck check_beckner(const ProbeFunction& probe, double p);

// Named probes of the standard battery in a fixed order.
std::vector<ProbeFunction> standard_battery();
// Every check of the battery, in probe order then check order.
std::vector<BoundCheck> run_checks(const ProbeFunction& probe, const BoundParams& p = {});
std::vector<BoundCheck> run_battery(const std::vector<ProbeFunction>& probes,
                                    const BoundParams& p = {});

struct BatterySummary {
  int passed = 0, failed = 0, skipped = 0;
  bool ok() const { return failed == 0; }
};
BatterySummary summarize(const std::vector<BoundCheck>& checks);

}  // namespace lsi::ineq
