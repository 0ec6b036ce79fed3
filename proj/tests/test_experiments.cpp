#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hml/combinatorics.hpp"
#include "hml/covariance.hpp"
#include "hml/experiments.hpp"

using hml::ExperimentConfig;
using hml::Report;
using hml::Target;

namespace {

const hml::ReportCell& cell_named(const Report& r, const std::string& name) {
  for (const auto& c : r.cells)
    if (c.name == name) return c;
  FAIL("missing cell: " + name);
  return r.cells.front();
}

bool same_cells(const Report& a, const Report& b) {
  if (a.cells.size() != b.cells.size()) return false;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    const auto& x = a.cells[i];
    const auto& y = b.cells[i];
    if (x.name != y.name || x.estimate != y.estimate || x.se != y.se ||
        x.target != y.target || x.pass != y.pass)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("lln run estimates the even-moment limits") {
  ExperimentConfig cfg;
  cfg.n = 60;
  cfg.beta = 2.0;
  cfg.reps = 3000;
  cfg.seed = 11;
  cfg.workers = 1;
  for (int k : {0, 1, 2, 3}) cfg.targets.push_back({k, 1.0, 0});

  const Report rep = hml::run_lln(cfg);
  REQUIRE(rep.experiment == "lln");
  REQUIRE(rep.cells.size() == 4);
  CHECK(rep.config["n"] == 60);
  CHECK(rep.config["k"].size() == 4);

  const auto& c0 = cell_named(rep, "k=0");
  CHECK(c0.estimate == Catch::Approx(1.0));  // trace minus minor trace of I
  CHECK(c0.target == 1.0);
  CHECK(c0.pass);

  const auto& c1 = cell_named(rep, "k=1");
  CHECK(c1.target == 0.0);
  CHECK(c1.pass);

  const auto& c2 = cell_named(rep, "k=2");
  CHECK(c2.target == 2.0);
  CHECK(c2.pass);
  double exact = 0.0, pass_exact = -1.0;
  for (const auto& [k, v] : c2.extras) {
    if (k == "exact_mean") exact = v;
    if (k == "pass_exact") pass_exact = v;
  }
  CHECK(exact ==
        Catch::Approx(hml::expected_trace_diff(cfg.n, 2, cfg.beta)));
  CHECK(pass_exact == 1.0);
  CHECK(std::fabs(c2.estimate - exact) <= 4.0 * c2.se);

  CHECK(cell_named(rep, "k=3").target == 0.0);
  CHECK(rep.all_pass());

  // same seed, same bytes; different seed, different sample path
  const Report again = hml::run_lln(cfg);
  CHECK(same_cells(rep, again));
  ExperimentConfig other = cfg;
  other.seed = 12;
  CHECK_FALSE(same_cells(rep, hml::run_lln(other)));
}

TEST_CASE("experiment results do not depend on the worker count") {
  ExperimentConfig cfg;
  cfg.n = 40;
  cfg.beta = 1.0;
  cfg.reps = 600;  // three blocks
  cfg.seed = 77;
  cfg.targets = {{1, 1.0, 0}, {2, 1.0, 0}, {2, 0.5, 0}};

  cfg.workers = 1;
  const Report lln1 = hml::run_lln(cfg);
  const Report clt1 = hml::run_clt(cfg);
  cfg.workers = 3;
  const Report lln3 = hml::run_lln(cfg);
  const Report clt3 = hml::run_clt(cfg);
  CHECK(same_cells(lln1, lln3));
  CHECK(same_cells(clt1, clt3));

  const Report chi1 = hml::run_chilemma({50}, 2.0, 600, 5, 1);
  const Report chi2 = hml::run_chilemma({50}, 2.0, 600, 5, 4);
  CHECK(same_cells(chi1, chi2));

  ExperimentConfig yc;
  yc.beta = 2.0;
  yc.reps = 300;
  yc.seed = 9;
  yc.n_values = {16, 32};
  yc.workers = 1;
  const Report y1 = hml::run_young(yc, 0.05);
  yc.workers = 2;
  const Report y2 = hml::run_young(yc, 0.05);
  CHECK(same_cells(y1, y2));
}

TEST_CASE("clt run recovers the joint covariance targets") {
  ExperimentConfig cfg;
  cfg.n = 80;
  cfg.beta = 1.0;
  cfg.reps = 4000;
  cfg.seed = 314;
  cfg.workers = 1;
  cfg.targets = {{1, 1.0, 0}, {2, 1.0, 0}, {2, 0.5, 0}};

  const Report rep = hml::run_clt(cfg);
  REQUIRE(rep.experiment == "clt");
  REQUIRE(rep.cells.size() == 6);  // upper triangle of a 3x3 grid

  const auto& v1 = cell_named(rep, "cov[a=1 k=1][a=1 k=1]");
  CHECK(v1.target == Catch::Approx(hml::clt_covariance(1, 1, cfg.beta)));
  CHECK(v1.target == Catch::Approx(2.0));

  const auto& v2 = cell_named(rep, "cov[a=1 k=2][a=1 k=2]");
  CHECK(v2.target == Catch::Approx(8.0));

  // parity mismatch inside one corner, and distinct corners: both vanish
  CHECK(cell_named(rep, "cov[a=1 k=1][a=1 k=2]").target == 0.0);
  CHECK(cell_named(rep, "cov[a=1 k=1][a=0.5 k=2]").target == 0.0);
  CHECK(cell_named(rep, "cov[a=1 k=2][a=0.5 k=2]").target == 0.0);
  CHECK(cell_named(rep, "cov[a=0.5 k=2][a=0.5 k=2]").target ==
        Catch::Approx(8.0));

  for (const auto& c : rep.cells) {
    bool has_centered = false, centering_ok = false;
    for (const auto& [k, v] : c.extras) {
      if (k == "cov_centered") has_centered = true;
      if (k == "centering_ok") centering_ok = (v == 1.0);
    }
    CHECK(has_centered);
    CHECK(centering_ok);
  }
  CHECK(rep.all_pass());
}

TEST_CASE("offset cross covariance at unit spacing reflects window "
          "independence") {
  ExperimentConfig cfg;
  cfg.n = 200;
  cfg.beta = 2.0;
  cfg.reps = 4000;
  cfg.seed = 2718;
  cfg.workers = 1;
  cfg.targets = {{2, 1.0, 0}, {2, 1.0, 1}};

  const Report rep = hml::run_offset(cfg);
  REQUIRE(rep.experiment == "offset");
  REQUIRE(rep.cells.size() == 3);

  const auto& d0 = cell_named(rep, "cov[c=0 k=2][c=0 k=2]");
  CHECK(d0.target == Catch::Approx(4.0));
  CHECK(d0.pass);
  const auto& d1 = cell_named(rep, "cov[c=1 k=2][c=1 k=2]");
  CHECK(d1.target == Catch::Approx(4.0));
  CHECK(d1.pass);

  // The tabulated cross target is 4, but the two observables sit on disjoint
  // entry windows of the sampled matrix, so the measured covariance is zero
  // and the cell honestly fails.
  const auto& cross = cell_named(rep, "cov[c=0 k=2][c=1 k=2]");
  CHECK(cross.target == Catch::Approx(hml::offset_covariance(2, 2, 1, 2.0)));
  CHECK(cross.target == Catch::Approx(4.0));
  CHECK(std::fabs(cross.estimate) < 1.0);
  CHECK_FALSE(cross.pass);
  CHECK_FALSE(rep.all_pass());
}

TEST_CASE("chilemma run matches the variance law") {
  const Report rep = hml::run_chilemma({30, 120}, 1.0, 5000, 21, 1);
  REQUIRE(rep.experiment == "chilemma");
  REQUIRE(rep.cells.size() == 6);
  for (const std::string& tag : {"[n=30]", "[n=120]"}) {
    const auto& v = cell_named(rep, "var" + tag);
    CHECK(v.target == Catch::Approx(2.0));
    CHECK(v.pass);
    CHECK(cell_named(rep, "skew" + tag).pass);
    const auto& k = cell_named(rep, "kurt" + tag);
    CHECK(k.target == 3.0);
    CHECK(k.pass);
  }
  CHECK(rep.all_pass());
}

TEST_CASE("young run tracks the limit-shape distance across sizes") {
  ExperimentConfig cfg;
  cfg.beta = 2.0;
  cfg.reps = 120;
  cfg.seed = 4;
  cfg.workers = 1;
  cfg.n_values = {24, 96};

  const Report rep = hml::run_young(cfg, 0.02);
  REQUIRE(rep.experiment == "young");
  REQUIRE(rep.cells.size() == 3);

  const auto& dec = cell_named(rep, "sup_decrease[24->96]");
  CHECK(dec.estimate < 0.0);
  CHECK(dec.pass);

  const auto& fin = cell_named(rep, "sup_final[n=96]");
  CHECK(fin.estimate > 0.0);
  CHECK(fin.estimate < 0.5);

  const auto& z0 = cell_named(rep, "z0[n=96]");
  CHECK(std::fabs(z0.estimate) < 0.05);
  CHECK(z0.pass);

  REQUIRE(rep.metadata["sup_median"].size() == 2);
  CHECK(rep.metadata["sup_median"][1].get<double>() ==
        Catch::Approx(fin.estimate));
}

TEST_CASE("normality run sees gaussian shape at large n") {
  ExperimentConfig cfg;
  cfg.n = 2000;
  cfg.beta = 2.0;
  cfg.reps = 2000;
  cfg.seed = 99;
  cfg.workers = 1;
  cfg.targets = {{1, 1.0, 0}, {2, 1.0, 0}, {3, 1.0, 0}};

  const Report rep = hml::run_normality(cfg);
  REQUIRE(rep.experiment == "normality");
  REQUIRE(rep.cells.size() == 6);
  for (int k : {1, 2, 3}) {
    const std::string tag = "[k=" + std::to_string(k) + "]";
    const auto& s = cell_named(rep, "skew" + tag);
    CHECK(s.target == 0.0);
    CHECK(s.pass);
    const auto& q = cell_named(rep, "kurt" + tag);
    CHECK(q.target == 3.0);
    CHECK(q.pass);
  }
  CHECK(rep.all_pass());
}

TEST_CASE("experiment configs are validated") {
  ExperimentConfig good;
  good.n = 50;
  good.beta = 2.0;
  good.reps = 100;
  good.targets = {{2, 1.0, 0}};

  auto bad = good;
  bad.n = 1;
  CHECK_THROWS_AS(hml::run_lln(bad), std::invalid_argument);
  bad = good;
  bad.beta = 0.0;
  CHECK_THROWS_AS(hml::run_lln(bad), std::invalid_argument);
  bad = good;
  bad.reps = 1;
  CHECK_THROWS_AS(hml::run_lln(bad), std::invalid_argument);
  bad = good;
  bad.targets.clear();
  CHECK_THROWS_AS(hml::run_lln(bad), std::invalid_argument);
  bad = good;
  bad.targets = {{-1, 1.0, 0}};
  CHECK_THROWS_AS(hml::run_lln(bad), std::invalid_argument);

  bad = good;
  bad.targets = {{2, 0.0, 0}};
  CHECK_THROWS_AS(hml::run_clt(bad), std::invalid_argument);
  bad.targets = {{2, 1.5, 0}};
  CHECK_THROWS_AS(hml::run_clt(bad), std::invalid_argument);
  bad.targets = {{2, 0.001, 0}};  // floor(alpha n) = 0
  CHECK_THROWS_AS(hml::run_clt(bad), std::invalid_argument);

  bad = good;
  bad.targets = {{2, 1.0, -1}};
  CHECK_THROWS_AS(hml::run_offset(bad), std::invalid_argument);
  bad.targets = {{2, 1.0, 49}};  // offset leaves a 1x1 block
  CHECK_THROWS_AS(hml::run_offset(bad), std::invalid_argument);

  CHECK_THROWS_AS(hml::run_chilemma({}, 2.0, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(hml::run_chilemma({1}, 2.0, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(hml::run_chilemma({50}, 2.0, 1, 1), std::invalid_argument);

  ExperimentConfig yc = good;
  CHECK_THROWS_AS(hml::run_young(yc, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hml::run_young(yc, 0.1, 0.0), std::invalid_argument);
  yc.n_values = {1, 50};
  CHECK_THROWS_AS(hml::run_young(yc, 0.1), std::invalid_argument);
}
