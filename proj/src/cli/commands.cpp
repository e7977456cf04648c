#include "lsi/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lsi/errors.hpp"
#include "lsi/flows.hpp"
#include "lsi/functionals.hpp"
#include "lsi/ineq.hpp"
#include "lsi/io.hpp"
#include "lsi/manifold.hpp"

namespace lsi::cli {

namespace {

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::invalid_argument("cannot open output file '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

struct ProbeOptions {
  std::string family, spec_file;
  int d = 1, n = 1, degree = 1;
  std::vector<double> b;
  double eps = 0.0, a = 1.0, a_exp = 1.5, lambda = 1.0;
  CLI::Option *d_opt = nullptr, *n_opt = nullptr, *b_opt = nullptr;

  void add(CLI::App* app) {
    app->add_option("--family", family, "constant|optimizer|tangent|example1|example2|prop42|euclid_gaussian|hermite");
    app->add_option("--spec", spec_file, "JSON probe spec file");
    d_opt = app->add_option("--d", d, "dimension");
    n_opt = app->add_option("--n", n, "sequence index");
    b_opt = app->add_option("--b", b, "centre / slope vector")->delimiter(',');
    app->add_option("--eps", eps, "tangent amplitude");
    app->add_option("--a", a, "prop42 excess moment");
    app->add_option("--a-exp", a_exp, "example2 exponent");
    app->add_option("--lambda", lambda, "euclid_gaussian scale");
    app->add_option("--degree", degree, "hermite degree");
  }

  std::optional<ProbeSpec> build() const {
    if (!spec_file.empty()) {
      if (!family.empty()) throw std::invalid_argument("give either --spec or --family, not both");
      std::ifstream in(spec_file);
      if (!in) throw std::invalid_argument("cannot read spec file '" + spec_file + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed spec file: ") + e.what());
      }
      return io::spec_from_json(j);
    }
    if (family.empty()) return std::nullopt;
    const auto f = family_from_name(family);
    if (!f || *f == Family::custom) throw std::invalid_argument("unknown family '" + family + "'");
    ProbeSpec s;
    s.family = *f;
    s.d = d;
    s.n = n;
    s.b = b;
    s.eps = eps;
    s.a = a;
    s.a_exp = a_exp;
    s.lambda = lambda;
    s.degree = degree;
    if (!b.empty() && d_opt->count() == 0) s.d = int(b.size());
    if ((s.family == Family::gaussian_optimizer || s.family == Family::euclid_gaussian) && s.b.empty())
      s.b.assign(s.d, 0.0);
    s.validate();
    return s;
  }
};

std::vector<flows::Component> parse_components(const std::string& text) {
  std::vector<flows::Component> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream is(item);
    std::string w, m, v;
    if (!std::getline(is, w, ':') || !std::getline(is, m, ':') || !std::getline(is, v) )
      throw std::invalid_argument("mixture component '" + item + "' is not w:m:v");
    try {
      out.push_back({std::stod(w), std::stod(m), std::stod(v)});
    } catch (const std::exception&) {
      throw std::invalid_argument("mixture component '" + item + "' is not numeric");
    }
  }
  if (out.empty()) throw std::invalid_argument("no mixture components");
  return out;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ineq::BoundParams params_of(const RunConfig& c) {
  ineq::BoundParams p;
  if (c.tolerance) {
    p.tolerance_floor = *c.tolerance;
    p.error_factor = 0.0;
  }
  if (c.error_factor) p.error_factor = *c.error_factor;
  return p;
}

}  // namespace

void RunConfig::validate() const {
  if (tolerance && !(*tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (error_factor && !(*error_factor >= 0.0)) throw std::invalid_argument("error factor must be >= 0");
  if (!format.empty() && format != "json" && format != "csv")
    throw std::invalid_argument("format must be json or csv");
  if (!mode.empty() && mode != "gaussian" && mode != "euclidean")
    throw std::invalid_argument("mode must be gaussian or euclidean");
  if (flow != "ou" && flow != "heat") throw std::invalid_argument("flow must be ou or heat");
  if (method != "mixture" && method != "hermite") throw std::invalid_argument("method must be mixture or hermite");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (t_max && !(*t_max > 0.1)) throw std::invalid_argument("t-max must be > 0.1");
}

int cmd_report(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!c.probe) throw std::invalid_argument("report: a probe (--family or --spec) is required");
  const ProbeFunction p = make_probe(*c.probe);
  const Mode m = c.mode.empty() ? p.mode() : (c.mode == "gaussian" ? Mode::gaussian : Mode::euclidean);
  const FunctionalReport r = report(p, m);
  nlohmann::json j{{"probe", io::to_json(*c.probe)}, {"label", p.label()}, {"report", io::to_json(r)}};
  Sink sink(c.output, out);
  io::write_json(sink.stream(), j);
  if (r.any_divergent()) {
    err << "divergent fields:";
    for (const auto& f : r.divergent_fields()) err << ' ' << f;
    err << '\n';
    return kDivergent;
  }
  return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const ineq::BoundParams params = params_of(c);
  std::vector<ineq::BoundCheck> rows;
  if (c.probe) rows = ineq::run_checks(make_probe(*c.probe), params);
  else rows = ineq::run_battery(ineq::standard_battery(), params);
  {
    Sink sink(c.output, out);
    if (c.format == "json") io::write_json(sink.stream(), io::summary_json(rows));
    else io::write_checks_csv(sink.stream(), rows);
  }
  if (!c.summary.empty()) {
    Sink s(c.summary, out);
    io::write_json(s.stream(), io::summary_json(rows));
  }
  const auto s = ineq::summarize(rows);
  err << s.passed << " passed, " << s.failed << " failed, " << s.skipped << " skipped\n";
  return s.ok() ? kOk : kCheckFailed;
}

int cmd_counterexample(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto fam = family_from_name(c.family);
  if (!fam || (*fam != Family::prop42 && *fam != Family::example1 && *fam != Family::tangent))
    throw std::invalid_argument("counterexample: family must be prop42, example1 or tangent");
  std::vector<double> values = c.sweep;
  if (values.empty()) {
    if (*fam == Family::prop42) values = {10, 20, 40, 80};
    else if (*fam == Family::example1) values = {1, 2, 4, 8};
    else values = {0.02, 0.04, 0.06, 0.08, 0.1};
  }
  Sink sink(c.output, out);
  auto& os = sink.stream();
  os << (*fam == Family::tangent ? "eps" : "n")
     << ",delta,second_moment,l2_distance_sq,h1_distance_sq,w2_sq\n";
  bool divergent = false;
  std::vector<double> deltas;
  const ProbeFunction bump = make_default_bump();
  for (double x : values) {
    ProbeFunction p = [&] {
      if (*fam == Family::prop42) return make_prop42(c.a, int(std::lround(x)));
      if (*fam == Family::example1) return make_example1(bump, int(std::lround(x)));
      return make_tangent(x, 1);
    }();
    const ProbeFunction v = to_mode(p, Mode::gaussian);
    const FunctionalReport r = report(v, Mode::gaussian);
    divergent = divergent || r.any_divergent();
    const double l2 = manifold::l2_distance_to_manifold(v).distance_sq;
    const double h1 = manifold::h1_seminorm_distance_to_manifold(v).distance_sq;
    const double w2 = w2_distance_1d(v);
    deltas.push_back(r.deficit.value);
    os << io::format_number(x) << ',' << io::format_number(r.deficit.value) << ','
       << io::format_number(r.second_moment.value) << ',' << io::format_number(l2) << ','
       << io::format_number(h1) << ',' << io::format_number(w2 * w2) << '\n';
  }
  if (*fam == Family::tangent && values.size() >= 2)
    err << "log-log slope of delta against eps: " << io::format_number(fitted_slope(values, deltas)) << '\n';
  return divergent ? kDivergent : kOk;
}

int cmd_flow(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const bool heat = c.flow == "heat";
  const flows::Reference ref = heat ? flows::Reference::lebesgue : flows::Reference::gaussian;
  const flows::GaussianMixture m = c.components.empty()
                                       ? flows::two_bump(2.0, 0.5, ref)
                                       : flows::GaussianMixture(parse_components(c.components), ref);
  const double t_max = c.t_max.value_or(heat ? 2.0 : 8.0);
  std::vector<double> times;
  for (int i = 0; i <= c.steps; ++i) times.push_back(t_max * i / c.steps);

  flows::FlowTrace trace;
  if (c.method == "hermite") {
    if (heat) throw std::invalid_argument("flow: the Hermite method applies to the Ornstein-Uhlenbeck flow only");
    trace = flows::trace_functionals(flows::hermite_projection(m, c.hermite_order), times);
  } else {
    trace = flows::trace_functionals(m, times);
  }
  {
    Sink sink(c.output, out);
    io::write_trace_csv(sink.stream(), trace);
  }

  const auto interior = flows::interior_times(std::min(t_max, 2.0), 10);
  std::vector<std::pair<std::string, flows::IdentityRow>> rows;
  for (const auto& r : flows::entropy_identity(m, interior)) rows.emplace_back("entropy", r);
  bool ok = true;
  if (heat) {
    for (const auto& r : flows::monitor_identity(m, interior)) rows.emplace_back("monitor", r);
    for (std::size_t i = 1; i < trace.samples.size(); ++i)
      if (trace.samples[i].monitor > trace.samples[i - 1].monitor + 1e-9) {
        err << "monitor increases between t = " << io::format_number(trace.samples[i - 1].t) << " and t = "
            << io::format_number(trace.samples[i].t) << '\n';
        ok = false;
      }
  } else {
    for (const auto& r : flows::fisher_identity(m, interior)) rows.emplace_back("fisher", r);
    const auto d = flows::deficit_via_flow(m, t_max);
    err << "deficit " << io::format_number(d.lhs) << " >= int R dt " << io::format_number(d.rhs) << ": "
        << ineq::status_name(d.status) << '\n';
    ok = ok && !d.failed();
  }
  for (const auto& [k, r] : rows) ok = ok && r.passed;
  if (!c.checks.empty()) {
    Sink s(c.checks, out);
    s.stream() << "identity,t,lhs,rhs,relative_error,passed\n";
    for (const auto& [k, r] : rows)
      s.stream() << k << ',' << io::format_number(r.t) << ',' << io::format_number(r.lhs) << ','
                 << io::format_number(r.rhs) << ',' << io::format_number(r.relative_error) << ','
                 << (r.passed ? "true" : "false") << '\n';
  }
  return ok ? kOk : kCheckFailed;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Logarithmic Sobolev inequality toolkit", "lsi"};
  app.require_subcommand(1);
  RunConfig c;
  ProbeOptions probe;

  auto* rep = app.add_subcommand("report", "functional report of one probe (JSON)");
  probe.add(rep);
  rep->add_option("--mode", c.mode, "gaussian|euclidean (default: the probe's own mode)");
  rep->add_option("--out", c.output, "output path");

  auto* ver = app.add_subcommand("verify", "bound checks over the standard battery or one probe (CSV)");
  ProbeOptions vprobe;
  vprobe.add(ver);
  ver->add_option("--tolerance", c.tolerance, "absolute tolerance; disables error scaling unless --error-factor is given");
  ver->add_option("--error-factor", c.error_factor, "multiplier of the propagated quadrature error");
  ver->add_option("--format", c.format, "csv|json");
  ver->add_option("--out", c.output, "output path");
  ver->add_option("--summary", c.summary, "JSON summary path");

  auto* cex = app.add_subcommand("counterexample", "instability sweep (CSV)");
  cex->add_option("--family", c.family, "prop42|example1|tangent")->required();
  cex->add_option("--a", c.a, "prop42 excess moment");
  cex->add_option("--values", c.sweep, "sweep values (n or eps)")->delimiter(',');
  cex->add_option("--out", c.output, "output path");

  auto* flo = app.add_subcommand("flow", "flow trace (CSV) with identity checks");
  flo->add_option("--flow", c.flow, "ou|heat");
  flo->add_option("--method", c.method, "mixture|hermite");
  flo->add_option("--components", c.components, "mixture as w:m:v,w:m:v");
  flo->add_option("--t-max", c.t_max, "final time");
  flo->add_option("--steps", c.steps, "number of time steps");
  flo->add_option("--hermite-order", c.hermite_order, "Hermite truncation K");
  flo->add_option("--out", c.output, "trace CSV path");
  flo->add_option("--checks", c.checks, "identity table CSV path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (rep->parsed()) {
      c.command = "report";
      c.probe = probe.build();
    } else if (ver->parsed()) {
      c.command = "verify";
      c.probe = vprobe.build();
      if (c.format.empty()) c.format = "csv";
    } else if (cex->parsed()) {
      c.command = "counterexample";
    } else {
      c.command = "flow";
    }
    c.validate();
    if (c.command == "report") return cmd_report(c, out, err);
    if (c.command == "verify") return cmd_verify(c, out, err);
    if (c.command == "counterexample") return cmd_counterexample(c, out, err);
    return cmd_flow(c, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace lsi::cli
