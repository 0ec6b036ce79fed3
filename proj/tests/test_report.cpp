#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "hml/report.hpp"

using hml::Report;
using hml::ReportCell;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line)) out.push_back(line);
  return out;
}

Report sample_report() {
  Report r;
  r.experiment = "demo";
  r.config["n"] = 10;
  r.metadata["note"] = "fixture";
  ReportCell a;
  a.name = "k=2";
  a.estimate = 1.9901234567890123;
  a.se = 0.03;
  a.target = 2.0;
  a.pass = true;
  a.extras.emplace_back("variance", 0.5);
  a.extras.emplace_back("exact_mean", 1.99);
  ReportCell b;
  b.name = "cov[a=1 k=1][a=1 k=2]";
  b.estimate = -0.001;
  b.se = 0.002;
  b.target = 0.0;
  b.pass = true;
  b.extras.emplace_back("cov_centered", -0.0012);
  r.cells = {a, b};
  return r;
}

}  // namespace

TEST_CASE("report json has the fixed key order and row shape") {
  const Report r = sample_report();
  const hml::json j = r.to_json();

  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"experiment", "config", "all_pass",
                                         "cells", "metadata"});

  CHECK(j["experiment"] == "demo");
  CHECK(j["config"]["n"] == 10);
  CHECK(j["all_pass"] == true);
  REQUIRE(j["cells"].size() == 2);
  const auto& row = j["cells"][0];
  CHECK(row["name"] == "k=2");
  CHECK(row["estimate"].get<double>() == 1.9901234567890123);
  CHECK(row["pass"] == true);
  CHECK(row["extras"]["variance"] == 0.5);
  CHECK(j["cells"][1]["extras"].contains("cov_centered"));
  CHECK(j["metadata"]["note"] == "fixture");
}

TEST_CASE("report json omits extras only when empty") {
  Report r;
  r.experiment = "demo";
  ReportCell c;
  c.name = "bare";
  r.cells.push_back(c);
  const hml::json j = r.to_json();
  CHECK_FALSE(j["cells"][0].contains("extras"));
}

TEST_CASE("report csv lists extras in first-appearance order") {
  const Report r = sample_report();
  std::ostringstream os;
  r.write_csv(os);
  const auto ls = lines_of(os.str());

  REQUIRE(ls.size() == 3);
  CHECK(ls[0] ==
        "experiment,cell,estimate,se,target,pass,variance,exact_mean,"
        "cov_centered");

  // first row carries its two extras and leaves the third column empty
  CHECK(ls[1] == "demo,k=2," + hml::fmt_double(1.9901234567890123) + "," +
                     hml::fmt_double(0.03) + ",2,1," + hml::fmt_double(0.5) +
                     "," + hml::fmt_double(1.99) + ",");
  // second row has only the last extra
  CHECK(ls[2].substr(ls[2].size() - hml::fmt_double(-0.0012).size()) ==
        hml::fmt_double(-0.0012));
  CHECK(ls[2].find(",,") != std::string::npos);
}

TEST_CASE("report csv quotes separators and doubled quotes") {
  Report r;
  r.experiment = "a,b";
  ReportCell c;
  c.name = "says \"hi\", twice";
  c.pass = false;
  r.cells.push_back(c);
  std::ostringstream os;
  r.write_csv(os);
  const auto ls = lines_of(os.str());
  REQUIRE(ls.size() == 2);
  CHECK(ls[1].rfind("\"a,b\",\"says \"\"hi\"\", twice\",", 0) == 0);
}

TEST_CASE("report pass flag is the conjunction of the cells") {
  Report r;
  CHECK(r.all_pass());  // vacuous
  ReportCell ok;
  ok.pass = true;
  ReportCell bad;
  bad.pass = false;
  r.cells = {ok, ok};
  CHECK(r.all_pass());
  r.cells.push_back(bad);
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("doubles survive the csv format round trip") {
  for (double v : {0.1, 1.0 / 3.0, 3.141592653589793, -2.2250738585072014e-308,
                   1.7976931348623157e308, 123456789.123456789, -0.0, 4.0}) {
    const std::string s = hml::fmt_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(hml::fmt_double(2.0) == "2");
}
