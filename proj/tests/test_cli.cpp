#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "lsi/cli.hpp"

using lsi::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("lsi_cli_test_" + name);
}

}  // namespace

TEST_CASE("report on the constant probe") {
  const auto r = call({"report", "--family", "constant", "--d", "2"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["report"]["deficit"]["value"].get<double>() == 0.0);
  CHECK(j["report"]["second_moment"]["value"].get<double>() == doctest::Approx(2.0));
  CHECK(j["probe"]["family"] == "constant");
}

TEST_CASE("report on prop42 in both modes") {
  auto r = call({"report", "--family", "prop42", "--n", "20", "--a", "1"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["report"]["second_moment"]["value"].get<double>() == doctest::Approx(1.99750623441).epsilon(1e-11));
  r = call({"report", "--family", "prop42", "--n", "20", "--mode", "euclidean"});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out);
  CHECK(j["report"]["mode"] == "euclidean");
}

TEST_CASE("report flags divergent fields with exit code 2") {
  const auto r = call({"report", "--family", "example2", "--a-exp", "1.5", "--mode", "euclidean"});
  CHECK(r.code == 2);
  CHECK(r.err.find("divergent") != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(call({}).code == 1);
  CHECK(call({"report", "--family", "nonsense"}).code == 1);
  CHECK(call({"report", "--family", "prop42", "--n", "1"}).code == 1);
  CHECK(call({"verify", "--tolerance", "-1"}).code == 1);
  CHECK(call({"flow", "--flow", "sideways"}).code == 1);
  CHECK(call({"flow", "--components", "0.5:0"}).code == 1);
  CHECK(call({"counterexample"}).code == 1);
  CHECK(call({"bogus"}).code == 1);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("malformed and unknown spec files are rejected") {
  const auto bad = temp_file("bad.json");
  {
    std::ofstream(bad) << "{\"family\": \"prop42\", \"n\": ";
  }
  CHECK(call({"report", "--spec", bad.string()}).code == 1);
  {
    std::ofstream(bad) << "{\"family\": \"prop42\", \"n\": 20, \"colour\": 3}";
  }
  CHECK(call({"report", "--spec", bad.string()}).code == 1);
  {
    std::ofstream(bad) << "{\"family\": \"prop42\", \"n\": 20, \"a\": 1.0}";
  }
  CHECK(call({"report", "--spec", bad.string()}).code == 0);
  std::filesystem::remove(bad);
}

TEST_CASE("verify over the standard battery") {
  const auto r = call({"verify"});
  CHECK(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() > 1);
  CHECK(rows[0] == "name,probe,lhs,rhs,margin,tolerance,passed,status,note");
  int skipped_stab0 = 0;
  for (const auto& l : rows)
    if (l.rfind("stab0,\"prop42(", 0) == 0) {
      CHECK(l.find("skipped") != std::string::npos);
      ++skipped_stab0;
    }
  CHECK(skipped_stab0 == 6);
  CHECK(r.err.find("0 failed") != std::string::npos);
}

TEST_CASE("verify exit code follows the failure count") {
  const auto r = call({"verify", "--family", "hermite", "--degree", "2", "--tolerance", "1e-30", "--format", "json"});
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["checks"].get<int>() == 17);
  CHECK(r.code == (j["failed"].get<int>() > 0 ? 3 : 0));
  const auto csv = call({"verify", "--family", "hermite", "--degree", "2", "--tolerance", "1e-30"});
  for (const auto& l : lines(csv.out))
    if (l.find(",skipped,") == std::string::npos && l.rfind("name,", 0) != 0) CHECK(l.find(",1e-30,") != std::string::npos);
  CHECK(call({"verify", "--family", "optimizer", "--b", "0.5", "--format", "json"}).code == 0);
}

TEST_CASE("verify writes a summary file") {
  const auto path = temp_file("summary.json");
  const auto r = call({"verify", "--family", "tangent", "--eps", "0.1", "--summary", path.string()});
  CHECK(r.code == 0);
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["ok"] == true);
  CHECK(j["checks"].get<int>() == 17);
  std::filesystem::remove(path);
}

TEST_CASE("counterexample sweeps") {
  auto r = call({"counterexample", "--family", "prop42", "--values", "10,20"});
  REQUIRE(r.code == 0);
  auto rows = lines(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "n,delta,second_moment,l2_distance_sq,h1_distance_sq,w2_sq");
  CHECK(rows[1].rfind("10,0.0312992345", 0) == 0);

  r = call({"counterexample", "--family", "tangent"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).size() == 6);
  const auto pos = r.err.find("slope of delta against eps: ");
  REQUIRE(pos != std::string::npos);
  const double slope = std::stod(r.err.substr(pos + 28));
  CHECK(slope == doctest::Approx(4.0).epsilon(0.025));

  r = call({"counterexample", "--family", "example1", "--values", "1,2"});
  CHECK(r.code == 0);
  CHECK(call({"counterexample", "--family", "hermite"}).code == 1);
}

TEST_CASE("flow subcommand") {
  auto r = call({"flow"});
  CHECK(r.code == 0);
  auto rows = lines(r.out);
  REQUIRE(rows.size() == 22);
  CHECK(rows[0] == "t,E,I,R,G");
  CHECK(r.err.find(": pass") != std::string::npos);

  r = call({"flow", "--flow", "heat", "--steps", "10"});
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 12);

  r = call({"flow", "--method", "hermite", "--t-max", "4", "--steps", "8"});
  CHECK(r.code == 0);

  r = call({"flow", "--components", "0.3:-1:0.5,0.7:1.5:2", "--t-max", "6"});
  CHECK(r.code == 0);

  CHECK(call({"flow", "--flow", "heat", "--method", "hermite"}).code == 1);
}

TEST_CASE("flow writes the identity table") {
  const auto path = temp_file("identities.csv");
  const auto r = call({"flow", "--checks", path.string()});
  CHECK(r.code == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto rows = lines(ss.str());
  REQUIRE(rows.size() == 21);
  CHECK(rows[0] == "identity,t,lhs,rhs,relative_error,passed");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].substr(rows[i].size() - 4) == "true");
  std::filesystem::remove(path);
}

TEST_CASE("outputs are byte-identical across runs") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"report", "--family", "tangent", "--eps", "0.3"},
           {"verify", "--family", "prop42", "--n", "10"},
           {"counterexample", "--family", "prop42", "--values", "10"},
           {"flow", "--steps", "5"}}) {
    const auto a = call(args), b = call(args);
    CHECK(a.out == b.out);
    CHECK(a.code == b.code);
  }
}
