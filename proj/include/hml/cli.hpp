#pragma once

#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "hml/covariance.hpp"
#include "hml/errors.hpp"
#include "hml/experiments.hpp"
#include "hml/householder.hpp"
#include "hml/paths.hpp"
#include "hml/report.hpp"
#include "hml/sampler.hpp"
#include "hml/sturm.hpp"
#include "hml/version.hpp"
#include "hml/young.hpp"

namespace hml {

/// Provenance block embedded in every output file. With --timestamp pinned,
/// re-running the same subcommand and config reproduces the output bytes.
struct RunManifest {
  std::string subcommand;
  json config;
  std::string version = kVersion;
  std::uint64_t timestamp = 0;

  json to_json() const {
    json j = json::object();
    j["subcommand"] = subcommand;
    j["version"] = version;
    j["timestamp"] = timestamp;
    j["config"] = config;
    return j;
  }

  void write_csv_comments(std::ostream& os) const {
    os << "# subcommand=" << subcommand << '\n';
    os << "# version=" << version << '\n';
    os << "# timestamp=" << timestamp << '\n';
    os << "# config=" << config.dump() << '\n';
  }
};

namespace cli_detail {

inline std::uint64_t resolve_timestamp(std::uint64_t requested) {
  if (requested != 0) return requested;
  return static_cast<std::uint64_t>(std::time(nullptr));
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream ofs(path, std::ios::binary);
  if (!ofs)
    throw std::invalid_argument("cannot open output file: " + path);
  return ofs;
}

inline void write_report_files(const std::string& out_base, const Report& rep,
                               const RunManifest& man) {
  {
    std::ofstream ofs = open_out(out_base + ".json");
    json doc = json::object();
    doc["manifest"] = man.to_json();
    doc["report"] = rep.to_json();
    ofs << doc.dump(2) << '\n';
  }
  {
    std::ofstream ofs = open_out(out_base + ".csv");
    man.write_csv_comments(ofs);
    rep.write_csv(ofs);
  }
}

inline void print_summary(const Report& rep, const std::string& out_base) {
  for (const ReportCell& c : rep.cells) {
    char line[256];
    std::snprintf(line, sizeof line, "%s %s estimate=%.6g target=%.6g se=%.3g",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.estimate,
                  c.target, c.se);
    std::cout << line << '\n';
  }
  std::cout << (rep.all_pass() ? "all cells pass" : "some cells FAIL")
            << "; wrote " << out_base << ".json and " << out_base << ".csv"
            << std::endl;
}

inline int finish_experiment(const Report& rep, const std::string& out_base,
                             const std::string& sub, std::uint64_t ts) {
  RunManifest man;
  man.subcommand = sub;
  man.config = rep.config;
  man.timestamp = resolve_timestamp(ts);
  write_report_files(out_base, rep, man);
  print_summary(rep, out_base);
  return rep.all_pass() ? 0 : 1;
}

inline std::vector<Target> cross_targets_alpha(const std::vector<double>& alphas,
                                               const std::vector<int>& ks) {
  std::vector<Target> ts;
  for (double a : alphas)
    for (int k : ks) {
      Target t;
      t.alpha = a;
      t.k = k;
      ts.push_back(t);
    }
  return ts;
}

inline std::vector<Target> cross_targets_offset(const std::vector<int>& cs,
                                                const std::vector<int>& ks) {
  std::vector<Target> ts;
  for (int c : cs)
    for (int k : ks) {
      Target t;
      t.offset = c;
      t.k = k;
      ts.push_back(t);
    }
  return ts;
}

/// Deterministic re-simulation of one young replicate (the first replicate
/// of the largest size, matching run_young's substream layout) for the
/// plot-data export.
inline YoungDiagram young_profile_diagram(std::size_t n, double beta,
                                          std::uint64_t seed,
                                          std::size_t size_index) {
  const rng::Stream root(seed);
  const BetaHermiteDraw draw(n, beta,
                                      root.substream(size_index).substream(0));
  std::vector<double> dg(n), of(n - 1);
  for (std::size_t i = 0; i < n; ++i) dg[i] = draw.diag(i + 1);
  for (std::size_t i = 0; i + 1 < n; ++i) of[i] = draw.offdiag(i + 1);
  const TridiagonalMatrix y =
      rescale(TridiagonalMatrix(std::move(dg), std::move(of)), n, beta);
  const Spectrum outer = eigenvalues(y);
  const Spectrum inner = eigenvalues(minor_of(y));
  const double slack = 10.0 * std::max(outer.tol, inner.tol);
  return build_diagram(outer.values, inner.values, slack);
}

inline void write_profile_files(const std::string& out_base,
                                const YoungDiagram& d, double grid_step,
                                double window) {
  std::ofstream wf = open_out(out_base + ".w.dat");
  std::ofstream of = open_out(out_base + ".omega.dat");
  const long steps = static_cast<long>(std::floor(2.0 * window / grid_step));
  for (long i = 0; i <= steps; ++i) {
    const double x = -window + static_cast<double>(i) * grid_step;
    wf << fmt_double(x) << ' ' << fmt_double(d.w(x)) << '\n';
    of << fmt_double(x) << ' ' << fmt_double(vkls(x)) << '\n';
  }
  const double last = -window + static_cast<double>(steps) * grid_step;
  if (window - last > 1e-9 * grid_step) {
    wf << fmt_double(window) << ' ' << fmt_double(d.w(window)) << '\n';
    of << fmt_double(window) << ' ' << fmt_double(vkls(window)) << '\n';
  }
}

}

/// Build the CLI, parse, dispatch, and map failures onto the exit-code
/// contract: 0 pass, 1 statistical failure, 2 usage or I/O error,
/// 3 resource (enumeration budget).
inline int run_cli(int argc, char** argv) {
  CLI::App app{"simulation and verification lab for the minor process of "
               "beta-Hermite tridiagonal matrices"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "read options from a key=value file");
  app.fallthrough();
  app.require_subcommand(1);

  std::uint64_t timestamp = 0;
  app.add_option("--timestamp", timestamp,
                 "pin the manifest timestamp (UTC seconds) for byte-exact "
                 "reproduction");

  // sample
  struct {
    std::size_t n = 4;
    double beta = 2.0;
    std::uint64_t seed = 1;
    std::string format = "json";
    std::string out;
  } a_sample;
  CLI::App* c_sample =
      app.add_subcommand("sample", "draw one tridiagonal matrix");
  c_sample->add_option("--n", a_sample.n, "matrix size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_sample->add_option("--beta", a_sample.beta, "ensemble parameter")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_sample->add_option("--seed", a_sample.seed, "rng seed")
      ->capture_default_str();
  c_sample->add_option("--format", a_sample.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  c_sample->add_option("--out", a_sample.out,
                       "output path (default: sample.<format>)");

  // tables
  struct {
    int kmax = 6;
    double beta = 2.0;
    std::string format = "csv";
    std::string out = "tables";
  } a_tables;
  CLI::App* c_tables = app.add_subcommand(
      "tables", "path statistics and covariance tables");
  c_tables->add_option("--kmax", a_tables.kmax, "largest power")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_tables->add_option("--beta", a_tables.beta, "ensemble parameter")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_tables->add_option("--format", a_tables.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  c_tables->add_option("--out", a_tables.out, "output path stem")
      ->capture_default_str();

  // shared experiment knobs, one struct per subcommand
  struct {
    std::size_t n = 1000;
    double beta = 2.0;
    std::size_t reps = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::vector<int> k = {1, 2, 3, 4, 5, 6};
    std::string out = "lln_report";
  } a_lln;
  CLI::App* c_lln =
      app.add_subcommand("lln", "means of D_{n,k} against the even-k limit");
  c_lln->add_option("--n", a_lln.n)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_lln->add_option("--beta", a_lln.beta)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_lln->add_option("--reps", a_lln.reps)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_lln->add_option("--seed", a_lln.seed)->capture_default_str();
  c_lln->add_option("--workers", a_lln.workers, "0 = all hardware threads")
      ->capture_default_str();
  c_lln->add_option("--k", a_lln.k, "powers, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  c_lln->add_option("--out", a_lln.out)->capture_default_str();

  struct {
    std::size_t n = 500;
    double beta = 2.0;
    std::size_t reps = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::vector<int> k = {1, 2, 3, 4};
    std::vector<double> alpha = {1.0};
    std::string out = "clt_report";
  } a_clt;
  CLI::App* c_clt = app.add_subcommand(
      "clt", "covariance of the fluctuation vector across corners");
  c_clt->add_option("--n", a_clt.n)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_clt->add_option("--beta", a_clt.beta)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_clt->add_option("--reps", a_clt.reps)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_clt->add_option("--seed", a_clt.seed)->capture_default_str();
  c_clt->add_option("--workers", a_clt.workers, "0 = all hardware threads")
      ->capture_default_str();
  c_clt->add_option("--k", a_clt.k, "powers, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  c_clt->add_option("--alpha", a_clt.alpha,
                    "corner fractions in (0,1], comma separated")
      ->delimiter(',')
      ->capture_default_str();
  c_clt->add_option("--out", a_clt.out)->capture_default_str();

  struct {
    std::size_t n = 500;
    double beta = 2.0;
    std::size_t reps = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::vector<int> k = {2};
    std::vector<int> offset = {0, 1, 2};
    std::string out = "offset_report";
  } a_offset;
  CLI::App* c_offset = app.add_subcommand(
      "offset", "covariances across constant minor offsets");
  c_offset->add_option("--n", a_offset.n)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_offset->add_option("--beta", a_offset.beta)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_offset->add_option("--reps", a_offset.reps)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_offset->add_option("--seed", a_offset.seed)->capture_default_str();
  c_offset->add_option("--workers", a_offset.workers,
                       "0 = all hardware threads")
      ->capture_default_str();
  c_offset->add_option("--k", a_offset.k, "powers, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  c_offset->add_option("--offset", a_offset.offset,
                       "minor offsets c, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  c_offset->add_option("--out", a_offset.out)->capture_default_str();

  struct {
    std::vector<std::size_t> n_values = {100, 1000};
    double beta = 2.0;
    std::size_t reps = 200;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    double grid_step = 1e-3;
    double window = 3.0;
    std::string out = "young_report";
  } a_young;
  CLI::App* c_young = app.add_subcommand(
      "young", "Young diagram convergence to the limit curve");
  c_young->add_option("--n-values", a_young.n_values,
                      "matrix sizes, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  c_young->add_option("--beta", a_young.beta)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_young->add_option("--reps", a_young.reps)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_young->add_option("--seed", a_young.seed)->capture_default_str();
  c_young->add_option("--workers", a_young.workers,
                      "0 = all hardware threads")
      ->capture_default_str();
  c_young->add_option("--grid-step", a_young.grid_step)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_young->add_option("--window", a_young.window)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_young->add_option("--out", a_young.out)->capture_default_str();

  struct {
    std::vector<std::size_t> dims = {5, 50, 200};
    std::size_t match_n = 6;
    std::vector<int> betas = {1, 2};
    std::size_t reps = 10000;
    std::size_t samples = 3;
    double tol = 1e-12;
    double significance = 1e-3;
    std::uint64_t seed = 1;
    std::string out = "householder_report";
  } a_hh;
  CLI::App* c_hh = app.add_subcommand(
      "householder", "dense reduction invariants and distribution match");
  c_hh->add_option("--dims", a_hh.dims,
                   "dense sizes for the preservation check, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  c_hh->add_option("--match-n", a_hh.match_n,
                   "size for the entrywise distribution match")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_hh->add_option("--betas", a_hh.betas, "ensembles (1 GOE, 2 GUE)")
      ->delimiter(',')
      ->capture_default_str();
  c_hh->add_option("--reps", a_hh.reps)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_hh->add_option("--samples", a_hh.samples,
                   "matrices per (ensemble, dim) preservation cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_hh->add_option("--tol", a_hh.tol, "preservation tolerance factor")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_hh->add_option("--significance", a_hh.significance,
                   "KS significance level")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_hh->add_option("--seed", a_hh.seed)->capture_default_str();
  c_hh->add_option("--out", a_hh.out)->capture_default_str();

  struct {
    std::vector<std::size_t> n_values = {10000};
    double beta = 2.0;
    std::size_t reps = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::string out = "chilemma_report";
  } a_chi;
  CLI::App* c_chi = app.add_subcommand(
      "chilemma", "Gaussian limit of the rescaled squared chi entry");
  c_chi->add_option("--n-values", a_chi.n_values,
                    "matrix sizes, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  c_chi->add_option("--beta", a_chi.beta)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_chi->add_option("--reps", a_chi.reps)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_chi->add_option("--seed", a_chi.seed)->capture_default_str();
  c_chi->add_option("--workers", a_chi.workers, "0 = all hardware threads")
      ->capture_default_str();
  c_chi->add_option("--out", a_chi.out)->capture_default_str();

  struct {
    std::size_t n = 5000;
    double beta = 2.0;
    std::size_t reps = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    std::vector<int> k = {1, 2};
    std::string out = "normality_report";
  } a_norm;
  CLI::App* c_norm = app.add_subcommand(
      "normality", "marginal skewness and kurtosis of the fluctuations");
  c_norm->add_option("--n", a_norm.n)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_norm->add_option("--beta", a_norm.beta)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_norm->add_option("--reps", a_norm.reps)->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_norm->add_option("--seed", a_norm.seed)->capture_default_str();
  c_norm->add_option("--workers", a_norm.workers, "0 = all hardware threads")
      ->capture_default_str();
  c_norm->add_option("--k", a_norm.k, "powers, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  c_norm->add_option("--out", a_norm.out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (c_sample->parsed()) {
      EnsembleParams p;
      p.n = a_sample.n;
      p.beta = a_sample.beta;
      p.seed = a_sample.seed;
      const TridiagonalMatrix x = sample_beta_hermite(p);
      RunManifest man;
      man.subcommand = "sample";
      man.config = json{{"n", a_sample.n},
                        {"beta", a_sample.beta},
                        {"seed", a_sample.seed},
                        {"format", a_sample.format}};
      man.timestamp = cli_detail::resolve_timestamp(timestamp);
      const std::string out =
          a_sample.out.empty() ? "sample." + a_sample.format : a_sample.out;
      std::ofstream ofs = cli_detail::open_out(out);
      if (a_sample.format == "json") {
        json doc = json::object();
        doc["manifest"] = man.to_json();
        json mat = json::object();
        mat["diag"] = x.diag;
        mat["offdiag"] = x.offdiag;
        doc["matrix"] = std::move(mat);
        ofs << doc.dump(2) << '\n';
      } else {
        man.write_csv_comments(ofs);
        ofs << "row,values\n";
        ofs << "diag";
        for (double v : x.diag) ofs << ',' << fmt_double(v);
        ofs << '\n';
        ofs << "offdiag";
        for (double v : x.offdiag) ofs << ',' << fmt_double(v);
        ofs << '\n';
      }
      std::cout << "wrote " << out << std::endl;
      return 0;
    }

    if (c_tables->parsed()) {
      RunManifest man;
      man.subcommand = "tables";
      man.config = json{{"kmax", a_tables.kmax},
                        {"beta", a_tables.beta},
                        {"format", a_tables.format}};
      man.timestamp = cli_detail::resolve_timestamp(timestamp);
      if (a_tables.format == "csv") {
        {
          std::ofstream ofs =
              cli_detail::open_out(a_tables.out + ".sigma.csv");
          man.write_csv_comments(ofs);
          ofs << "k,h,sigma,pi\n";
          for (int k = 1; k <= a_tables.kmax; ++k)
            for (int h = 1; h <= paths::level_count(k); ++h)
              ofs << k << ',' << h << ',' << paths::sigma(k, h) << ','
                  << paths::pi(k, h) << '\n';
        }
        {
          std::ofstream ofs = cli_detail::open_out(a_tables.out + ".cov.csv");
          man.write_csv_comments(ofs);
          ofs << "k1,k2,c,covariance\n";
          for (int k1 = 1; k1 <= a_tables.kmax; ++k1)
            for (int k2 = k1; k2 <= a_tables.kmax; ++k2)
              for (int c = 0; c <= (k1 + k2) / 2; ++c)
                ofs << k1 << ',' << k2 << ',' << c << ','
                    << fmt_double(
                           offset_covariance(k1, k2, c, a_tables.beta))
                    << '\n';
        }
        std::cout << "wrote " << a_tables.out << ".sigma.csv and "
                  << a_tables.out << ".cov.csv" << std::endl;
      } else {
        json doc = json::object();
        doc["manifest"] = man.to_json();
        json sig = json::array();
        for (int k = 1; k <= a_tables.kmax; ++k)
          for (int h = 1; h <= paths::level_count(k); ++h)
            sig.push_back(json{{"k", k},
                               {"h", h},
                               {"sigma", paths::sigma(k, h)},
                               {"pi", paths::pi(k, h)}});
        doc["sigma"] = std::move(sig);
        json cov = json::array();
        for (int k1 = 1; k1 <= a_tables.kmax; ++k1)
          for (int k2 = k1; k2 <= a_tables.kmax; ++k2)
            for (int c = 0; c <= (k1 + k2) / 2; ++c)
              cov.push_back(
                  json{{"k1", k1},
                       {"k2", k2},
                       {"c", c},
                       {"covariance",
                        offset_covariance(k1, k2, c, a_tables.beta)}});
        doc["covariance"] = std::move(cov);
        std::ofstream ofs = cli_detail::open_out(a_tables.out + ".json");
        ofs << doc.dump(2) << '\n';
        std::cout << "wrote " << a_tables.out << ".json" << std::endl;
      }
      return 0;
    }

    if (c_lln->parsed()) {
      ExperimentConfig cfg;
      cfg.n = a_lln.n;
      cfg.beta = a_lln.beta;
      cfg.reps = a_lln.reps;
      cfg.seed = a_lln.seed;
      cfg.workers = a_lln.workers;
      for (int k : a_lln.k) {
        Target t;
        t.k = k;
        cfg.targets.push_back(t);
      }
      return cli_detail::finish_experiment(run_lln(cfg), a_lln.out, "lln",
                                           timestamp);
    }

    if (c_clt->parsed()) {
      ExperimentConfig cfg;
      cfg.n = a_clt.n;
      cfg.beta = a_clt.beta;
      cfg.reps = a_clt.reps;
      cfg.seed = a_clt.seed;
      cfg.workers = a_clt.workers;
      cfg.targets = cli_detail::cross_targets_alpha(a_clt.alpha, a_clt.k);
      return cli_detail::finish_experiment(run_clt(cfg), a_clt.out, "clt",
                                           timestamp);
    }

    if (c_offset->parsed()) {
      ExperimentConfig cfg;
      cfg.n = a_offset.n;
      cfg.beta = a_offset.beta;
      cfg.reps = a_offset.reps;
      cfg.seed = a_offset.seed;
      cfg.workers = a_offset.workers;
      cfg.targets = cli_detail::cross_targets_offset(a_offset.offset,
                                                     a_offset.k);
      return cli_detail::finish_experiment(run_offset(cfg), a_offset.out,
                                           "offset", timestamp);
    }

    if (c_young->parsed()) {
      ExperimentConfig cfg;
      cfg.beta = a_young.beta;
      cfg.reps = a_young.reps;
      cfg.seed = a_young.seed;
      cfg.workers = a_young.workers;
      cfg.n_values = a_young.n_values;
      if (!cfg.n_values.empty()) cfg.n = cfg.n_values.front();
      const Report rep = run_young(cfg, a_young.grid_step, a_young.window);
      std::vector<std::size_t> sizes = a_young.n_values;
      std::sort(sizes.begin(), sizes.end());
      sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
      cli_detail::write_profile_files(
          a_young.out,
          cli_detail::young_profile_diagram(sizes.back(), a_young.beta,
                                            a_young.seed, sizes.size() - 1),
          a_young.grid_step, a_young.window);
      const int rc = cli_detail::finish_experiment(rep, a_young.out, "young",
                                                   timestamp);
      std::cout << "wrote " << a_young.out << ".w.dat and " << a_young.out
                << ".omega.dat" << std::endl;
      return rc;
    }

    if (c_hh->parsed()) {
      Report rep;
      rep.experiment = "householder";
      rep.config["dims"] = a_hh.dims;
      rep.config["match_n"] = a_hh.match_n;
      rep.config["betas"] = a_hh.betas;
      rep.config["reps"] = a_hh.reps;
      rep.config["samples"] = a_hh.samples;
      rep.config["tol"] = a_hh.tol;
      rep.config["significance"] = a_hh.significance;
      rep.config["seed"] = a_hh.seed;
      const rng::Stream root(a_hh.seed);
      for (std::size_t bi = 0; bi < a_hh.betas.size(); ++bi) {
        const int beta = a_hh.betas[bi];
        if (beta != 1 && beta != 2)
          throw std::invalid_argument("householder: --betas entries must be 1 or 2");
        for (std::size_t di = 0; di < a_hh.dims.size(); ++di) {
          const std::size_t dim = a_hh.dims[di];
          if (dim < 2)
            throw std::invalid_argument("householder: --dims entries must be >= 2");
          rng::Stream s = root.substream(1 + bi * 64 + di);
          double worst = 0.0;
          for (std::size_t r = 0; r < a_hh.samples; ++r) {
            const DenseSymmetric a = (beta == 1) ? sample_goe(dim, s)
                                                 : sample_gue(dim, s);
            const double scale =
                std::max(1.0, static_cast<double>(dim) * a.max_abs());
            worst = std::max(worst,
                             preservation_gap(a) / (a_hh.tol * scale));
          }
          ReportCell c;
          c.name = std::string("preserve[") + (beta == 1 ? "goe" : "gue") +
                   " dim=" + std::to_string(dim) + "]";
          c.estimate = worst;
          c.se = 0.0;
          c.target = 1.0;
          c.pass = worst <= 1.0;
          c.extras.emplace_back("samples",
                                static_cast<double>(a_hh.samples));
          rep.cells.push_back(std::move(c));
        }
      }
      for (std::size_t bi = 0; bi < a_hh.betas.size(); ++bi) {
        const int beta = a_hh.betas[bi];
        rng::Stream s = root.substream(1000 + bi);
        const DistributionMatchReport m = distribution_match(
            a_hh.match_n, beta, a_hh.reps, s, a_hh.significance);
        for (const EntryMatch& em : m.entries) {
          ReportCell c;
          c.name = "ks[beta=" + std::to_string(beta) + "][" + em.name + "]";
          c.estimate = em.ks;
          c.se = 0.0;
          c.target = em.threshold;
          c.pass = em.pass;
          rep.cells.push_back(std::move(c));
        }
      }
      return cli_detail::finish_experiment(rep, a_hh.out, "householder",
                                           timestamp);
    }

    if (c_chi->parsed()) {
      const Report rep = run_chilemma(a_chi.n_values, a_chi.beta, a_chi.reps,
                                      a_chi.seed, a_chi.workers);
      return cli_detail::finish_experiment(rep, a_chi.out, "chilemma",
                                           timestamp);
    }

    if (c_norm->parsed()) {
      ExperimentConfig cfg;
      cfg.n = a_norm.n;
      cfg.beta = a_norm.beta;
      cfg.reps = a_norm.reps;
      cfg.seed = a_norm.seed;
      cfg.workers = a_norm.workers;
      for (int k : a_norm.k) {
        Target t;
        t.k = k;
        cfg.targets.push_back(t);
      }
      return cli_detail::finish_experiment(run_normality(cfg), a_norm.out,
                                           "normality", timestamp);
    }
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}
