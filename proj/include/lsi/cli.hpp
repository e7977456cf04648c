#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lsi/probe.hpp"

namespace lsi::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDivergent = 2, kCheckFailed = 3 };

struct RunConfig {
  std::string command;
  std::optional<ProbeSpec> probe;
  std::optional<double> tolerance;
  std::optional<double> error_factor;
  std::string output;  // empty: standard output
  std::string format;  // json | csv; empty picks the command's default
  std::vector<double> sweep;

  std::string mode;         // report: gaussian | euclidean, empty for the native mode
  std::string summary;      // verify: JSON summary path
  std::string family;       // counterexample: prop42 | example1 | tangent
  double a = 1.0;           // counterexample: prop42 excess moment
  std::string flow = "ou";  // flow: ou | heat
  std::string method = "mixture";
  std::string components;   // flow: "w:m:v,w:m:v"; empty for the two-bump mixture
  std::optional<double> t_max;
  int steps = 20;
  int hermite_order = 64;
  std::string checks;       // flow: identity table CSV path

  void validate() const;
};

int cmd_report(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_counterexample(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_flow(const RunConfig& c, std::ostream& out, std::ostream& err);

// args excludes the program name. Data goes to out (or the output file), diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lsi::cli
