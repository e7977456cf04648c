#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsi/flows.hpp"
#include "lsi/functionals.hpp"
#include "lsi/ineq.hpp"
#include "lsi/probe.hpp"

namespace lsi::io {

// %.12g in the C locale; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);
// x rounded to 12 significant digits (non-finite values unchanged).
double round12(double x);

nlohmann::json to_json(const Estimate& e);
nlohmann::json to_json(const FunctionalReport& r);
nlohmann::json to_json(const ProbeSpec& s);
nlohmann::json to_json(const ineq::BoundCheck& c);
nlohmann::json summary_json(const std::vector<ineq::BoundCheck>& checks);

// Accepts {"family": name, "d", "b", "eps", "n", "a", "a_exp", "lambda", "degree"}; unknown keys are errors.
ProbeSpec spec_from_json(const nlohmann::json& j);

// Columns: name,probe,lhs,rhs,margin,tolerance,passed,status,note
void write_checks_csv(std::ostream& os, const std::vector<ineq::BoundCheck>& checks);
// Columns: t,E,I,R,G
void write_trace_csv(std::ostream& os, const flows::FlowTrace& trace);

// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

// Writes the document followed by a newline, with 12-digit numbers.
void write_json(std::ostream& os, const nlohmann::json& j);

}  // namespace lsi::io
