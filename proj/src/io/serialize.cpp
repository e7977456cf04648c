#include "lsi/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace lsi::io {

namespace {

nlohmann::json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_number(x).c_str(), nullptr);
}

nlohmann::json to_json(const Estimate& e) {
  return {{"value", number(e.value)},
          {"error", number(e.error)},
          {"converged", e.converged},
          {"divergent", e.divergent}};
}

nlohmann::json to_json(const FunctionalReport& r) {
  nlohmann::json j;
  j["mode"] = std::string(mode_name(r.mode));
  j["dimension"] = r.dimension;
  j["l2_norm_sq"] = to_json(r.l2_norm_sq);
  j["fisher"] = to_json(r.fisher);
  j["entropy"] = to_json(r.entropy);
  j["raw_entropy"] = to_json(r.raw_entropy);
  j["abs_entropy"] = to_json(r.abs_entropy);
  j["entropy_below_one"] = to_json(r.entropy_below_one);
  j["second_moment"] = to_json(r.second_moment);
  j["deficit"] = to_json(r.deficit);
  nlohmann::json fm = nlohmann::json::array();
  for (const auto& e : r.first_moment) fm.push_back(to_json(e));
  j["first_moment"] = fm;
  j["l1_deviation"] = r.l1_deviation ? to_json(*r.l1_deviation) : nlohmann::json(nullptr);
  j["nonnegative"] = r.nonnegative;
  j["divergent_fields"] = r.divergent_fields();
  j["unconverged_fields"] = r.unconverged_fields();
  return j;
}

nlohmann::json to_json(const ProbeSpec& s) {
  nlohmann::json j{{"family", std::string(family_name(s.family))}, {"d", s.d}};
  switch (s.family) {
    case Family::gaussian_optimizer:
    case Family::euclid_gaussian:
      j["b"] = s.b;
      if (s.family == Family::euclid_gaussian) j["lambda"] = s.lambda;
      break;
    case Family::tangent: j["eps"] = s.eps; break;
    case Family::example1: j["n"] = s.n; break;
    case Family::example2: j["a_exp"] = s.a_exp; break;
    case Family::prop42:
      j["a"] = s.a;
      j["n"] = s.n;
      break;
    case Family::hermite: j["degree"] = s.degree; break;
    case Family::constant:
    case Family::custom: break;
  }
  return j;
}

ProbeSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("probe spec: JSON object expected");
  if (!j.contains("family") || !j["family"].is_string())
    throw std::invalid_argument("probe spec: missing string field 'family'");
  ProbeSpec s;
  const auto fam = family_from_name(j["family"].get<std::string>());
  if (!fam || *fam == Family::custom)
    throw std::invalid_argument("probe spec: unknown family '" + j["family"].get<std::string>() + "'");
  s.family = *fam;
  for (const auto& [key, value] : j.items()) {
    if (key == "family") continue;
    if (key == "d") s.d = value.get<int>();
    else if (key == "b") s.b = value.get<std::vector<double>>();
    else if (key == "eps") s.eps = value.get<double>();
    else if (key == "n") s.n = value.get<int>();
    else if (key == "a") s.a = value.get<double>();
    else if (key == "a_exp") s.a_exp = value.get<double>();
    else if (key == "lambda") s.lambda = value.get<double>();
    else if (key == "degree") s.degree = value.get<int>();
    else throw std::invalid_argument("probe spec: unknown field '" + key + "'");
  }
  if (j.contains("b") && !j.contains("d")) s.d = int(s.b.size());
  s.validate();
  return s;
}

nlohmann::json to_json(const ineq::BoundCheck& c) {
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& [k, v] : c.inputs) inputs[k] = number(v);
  return {{"name", c.name},
          {"probe", c.probe},
          {"lhs", number(c.lhs)},
          {"rhs", number(c.rhs)},
          {"margin", number(c.margin)},
          {"tolerance", number(c.tolerance)},
          {"status", std::string(ineq::status_name(c.status))},
          {"note", c.note},
          {"inputs", inputs}};
}

nlohmann::json summary_json(const std::vector<ineq::BoundCheck>& checks) {
  const auto s = ineq::summarize(checks);
  nlohmann::json failures = nlohmann::json::array();
  double worst = INFINITY;
  for (const auto& c : checks) {
    if (c.failed()) failures.push_back(to_json(c));
    if (!c.skipped()) worst = std::min(worst, c.margin + c.tolerance);
  }
  return {{"checks", checks.size()},
          {"passed", s.passed},
          {"failed", s.failed},
          {"skipped", s.skipped},
          {"ok", s.ok()},
          {"worst_slack", number(worst)},
          {"failures", failures}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_checks_csv(std::ostream& os, const std::vector<ineq::BoundCheck>& checks) {
  os << "name,probe,lhs,rhs,margin,tolerance,passed,status,note\n";
  for (const auto& c : checks) {
    os << csv_field(c.name) << ',' << csv_field(c.probe) << ',' << format_number(c.lhs) << ','
       << format_number(c.rhs) << ',' << format_number(c.margin) << ',' << format_number(c.tolerance) << ','
       << (c.passed() ? "true" : "false") << ',' << ineq::status_name(c.status) << ',' << csv_field(c.note)
       << '\n';
  }
}

void write_trace_csv(std::ostream& os, const flows::FlowTrace& trace) {
  os << "t,E,I,R,G\n";
  for (const auto& s : trace.samples)
    os << format_number(s.t) << ',' << format_number(s.entropy) << ',' << format_number(s.fisher) << ','
       << format_number(s.remainder) << ',' << format_number(s.monitor) << '\n';
}

void write_json(std::ostream& os, const nlohmann::json& j) { os << j.dump(2) << '\n'; }

}  // namespace lsi::io
