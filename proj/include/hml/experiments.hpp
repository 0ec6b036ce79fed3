#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hml/covariance.hpp"
#include "hml/report.hpp"
#include "hml/rng.hpp"
#include "hml/sampler.hpp"
#include "hml/stats.hpp"
#include "hml/sturm.hpp"
#include "hml/trace.hpp"
#include "hml/tridiagonal.hpp"
#include "hml/young.hpp"

namespace hml {

/// One observable: D of the k-th power, taken either on the alpha-fraction
/// corner (run_clt) or on the minor at fixed offset c (run_offset).
struct Target {
  int k = 2;
  double alpha = 1.0;
  int offset = 0;
};

struct ExperimentConfig {
  std::size_t n = 500;
  double beta = 2.0;
  std::size_t reps = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0: all hardware threads
  std::vector<Target> targets;
  std::vector<std::size_t> n_values;  // multi-size experiments
};

namespace experiments_detail {

/// Replicates are processed in fixed blocks and merged in block order, so
/// the result is bit-identical for every worker count.
constexpr std::size_t kBlockSize = 256;

template <class Acc, class MakeFn, class RepFn>
Acc run_blocks(std::size_t reps, unsigned workers, MakeFn make, RepFn per_rep) {
  const std::size_t nblocks = (reps + kBlockSize - 1) / kBlockSize;
  std::vector<Acc> blocks;
  blocks.reserve(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) blocks.push_back(make());
  auto work_block = [&](std::size_t b) {
    const std::size_t lo = b * kBlockSize;
    const std::size_t hi = std::min(reps, lo + kBlockSize);
    for (std::size_t r = lo; r < hi; ++r) per_rep(blocks[b], r);
  };
  unsigned w = workers ? workers
                       : std::max(1u, std::thread::hardware_concurrency());
  w = static_cast<unsigned>(
      std::min<std::size_t>(w, nblocks));
  if (w <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b) work_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (unsigned t = 0; t < w; ++t)
      pool.emplace_back([&] {
        while (!failed.load(std::memory_order_relaxed)) {
          const std::size_t b = next.fetch_add(1);
          if (b >= nblocks) break;
          try {
            work_block(b);
          } catch (...) {
            std::lock_guard<std::mutex> lock(err_mu);
            if (!err) err = std::current_exception();
            failed.store(true);
          }
        }
      });
    for (std::thread& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }
  Acc out = std::move(blocks.front());
  for (std::size_t b = 1; b < nblocks; ++b) out.merge(blocks[b]);
  return out;
}

/// Precomputed evaluation plan for one target inside the nested family
/// rooted at size n: the m x m corner starts pos0 entries down, and its D
/// value comes from the trace polynomial on the rescaled window.
struct TargetPlan {
  int k;
  std::size_t m;
  std::size_t pos0;
  double scale;       // sqrt(2 / (m beta))
  int cap;
  const TracePolynomial* poly;
  double center;      // subtracted before scaling
  double post_scale;  // multiplier on (D - center)
};

inline TargetPlan make_plan(std::size_t n, std::size_t m, int k, double beta,
                            double center, double post_scale) {
  TargetPlan p;
  p.k = k;
  p.m = m;
  p.pos0 = n - m;
  p.scale = std::sqrt(2.0 / (static_cast<double>(m) * beta));
  p.cap = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(paths::window_cap(k)), m));
  p.poly = &TracePolynomial::get(k, p.cap);
  p.center = center;
  p.post_scale = post_scale;
  return p;
}

inline double eval_plan(const BetaHermiteDraw& draw,
                        const TargetPlan& t, std::vector<double>& dbuf,
                        std::vector<double>& obuf) {
  dbuf.resize(static_cast<std::size_t>(t.cap));
  obuf.resize(t.cap > 0 ? static_cast<std::size_t>(t.cap - 1) : 0);
  for (int j = 0; j < t.cap; ++j)
    dbuf[static_cast<std::size_t>(j)] =
        t.scale * draw.diag(t.pos0 + 1 + static_cast<std::size_t>(j));
  for (int j = 0; j + 1 < t.cap; ++j)
    obuf[static_cast<std::size_t>(j)] =
        t.scale * draw.offdiag(t.pos0 + 1 + static_cast<std::size_t>(j));
  const double d = t.poly->eval(dbuf.data(), obuf.data());
  return t.post_scale * (d - t.center);
}

inline std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return std::string(buf);
}

inline void check_common(const ExperimentConfig& cfg, bool need_targets) {
  if (cfg.n < 2)
    throw std::invalid_argument("experiment config: n must be >= 2");
  if (!(cfg.beta > 0.0))
    throw std::invalid_argument("experiment config: beta must be positive");
  if (cfg.reps < 2)
    throw std::invalid_argument("experiment config: reps must be >= 2");
  if (need_targets && cfg.targets.empty())
    throw std::invalid_argument("experiment config: no targets given");
  for (const Target& t : cfg.targets)
    if (t.k < 0)
      throw std::invalid_argument("experiment config: k must be >= 0");
}

struct MultiMoments {
  std::vector<stats::ScalarMoments> ms;
  void merge(const MultiMoments& o) {
    for (std::size_t i = 0; i < ms.size(); ++i) ms[i].merge(o.ms[i]);
  }
};

inline double sample_sd(const std::vector<double>& xs) {
  stats::ScalarMoments m;
  for (double x : xs) m.add(x);
  return std::sqrt(m.variance());
}

// se of a sample median, Gaussian large-sample approximation
inline double se_median(const std::vector<double>& xs) {
  return 1.2533141373155003 * sample_sd(xs) /
         std::sqrt(static_cast<double>(xs.size()));
}

}

/// Law of large numbers for D_{n,k}: empirical means against the k-even
/// limit binom(k, k/2) (odd limit 0) with a 4 SE band plus an O(1/n) bias
/// allowance; the exact finite-n mean rides along in the extras.
inline Report run_lln(const ExperimentConfig& cfg) {
  experiments_detail::check_common(cfg, true);
  const std::size_t T = cfg.targets.size();
  std::vector<experiments_detail::TargetPlan> plans;
  for (const Target& t : cfg.targets)
    plans.push_back(experiments_detail::make_plan(cfg.n, cfg.n, t.k, cfg.beta,
                                                  0.0, 1.0));
  const rng::Stream root(cfg.seed);
  auto acc = experiments_detail::run_blocks<stats::MomentAccumulator>(
      cfg.reps, cfg.workers, [T] { return stats::MomentAccumulator(T); },
      [&](stats::MomentAccumulator& a, std::size_t rep) {
        const BetaHermiteDraw draw(cfg.n, cfg.beta,
                                            root.substream(rep));
        std::vector<double> vals(T), dbuf, obuf;
        for (std::size_t i = 0; i < T; ++i)
          vals[i] = experiments_detail::eval_plan(draw, plans[i], dbuf, obuf);
        a.add(vals);
      });

  Report rep;
  rep.experiment = "lln";
  rep.config["n"] = cfg.n;
  rep.config["beta"] = cfg.beta;
  rep.config["reps"] = cfg.reps;
  rep.config["seed"] = cfg.seed;
  {
    json ks = json::array();
    for (const Target& t : cfg.targets) ks.push_back(t.k);
    rep.config["k"] = std::move(ks);
  }
  for (std::size_t i = 0; i < T; ++i) {
    const int k = cfg.targets[i].k;
    ReportCell c;
    c.name = "k=" + std::to_string(k);
    c.estimate = acc.mean(i);
    c.se = acc.se_mean(i);
    c.target = (k % 2 == 0) ? binomial_real(k, k / 2) : 0.0;
    const double allowance =
        std::max(4.0 * c.se, 10.0 / static_cast<double>(cfg.n));
    c.pass = std::fabs(c.estimate - c.target) <= allowance;
    const double exact = expected_trace_diff(cfg.n, k, cfg.beta);
    c.extras.emplace_back("exact_mean", exact);
    c.extras.emplace_back("pass_exact",
                          std::fabs(c.estimate - exact) <= 4.0 * c.se ? 1.0
                                                                      : 0.0);
    c.extras.emplace_back("variance", acc.covariance(i, i));
    rep.cells.push_back(std::move(c));
  }
  return rep;
}

namespace experiments_detail {

/// Shared covariance-matrix experiment body for run_clt and run_offset.
inline Report covariance_experiment(
    const ExperimentConfig& cfg, const std::vector<TargetPlan>& plans,
    const std::vector<std::string>& labels,
    const std::vector<std::vector<double>>& pair_targets) {
  const std::size_t T = plans.size();
  const rng::Stream root(cfg.seed);
  auto acc = run_blocks<stats::MomentAccumulator>(
      cfg.reps, cfg.workers, [T] { return stats::MomentAccumulator(T); },
      [&](stats::MomentAccumulator& a, std::size_t rep) {
        const BetaHermiteDraw draw(cfg.n, cfg.beta,
                                            root.substream(rep));
        std::vector<double> vals(T), dbuf, obuf;
        for (std::size_t i = 0; i < T; ++i)
          vals[i] = eval_plan(draw, plans[i], dbuf, obuf);
        a.add(vals);
      });
  Report rep;
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t j = i; j < T; ++j) {
      ReportCell c;
      c.name = "cov[" + labels[i] + "][" + labels[j] + "]";
      c.estimate = acc.second_moment(i, j);
      c.se = acc.se_second_moment(i, j);
      c.target = pair_targets[i][j];
      c.pass = std::fabs(c.estimate - c.target) <=
               std::max(5.0 * c.se, 0.05 * std::fabs(c.target));
      const double centered = acc.covariance(i, j);
      c.extras.emplace_back("cov_centered", centered);
      c.extras.emplace_back(
          "centering_ok",
          std::fabs(c.estimate - centered) <= 5.0 * c.se ? 1.0 : 0.0);
      rep.cells.push_back(std::move(c));
    }
  return rep;
}

}

/// Joint CLT of sqrt(m_i) (D_{m_i,k_i} - E D) over corners m_i = floor(
/// alpha_i n) of one sampled matrix. Targets vanish across distinct alpha
/// and mismatched parity; otherwise (4/beta) k_i k_j / (k_i+k_j) binom(...).
inline Report run_clt(const ExperimentConfig& cfg) {
  experiments_detail::check_common(cfg, true);
  std::vector<experiments_detail::TargetPlan> plans;
  std::vector<std::string> labels;
  for (const Target& t : cfg.targets) {
    if (!(t.alpha > 0.0 && t.alpha <= 1.0))
      throw std::invalid_argument("run_clt: alpha must be in (0,1]");
    const std::size_t m = static_cast<std::size_t>(
        std::floor(t.alpha * static_cast<double>(cfg.n)));
    if (m < 2)
      throw std::invalid_argument("run_clt: floor(alpha n) must be >= 2");
    const double center = expected_trace_diff(m, t.k, cfg.beta);
    plans.push_back(experiments_detail::make_plan(
        cfg.n, m, t.k, cfg.beta, center, std::sqrt(static_cast<double>(m))));
    labels.push_back("a=" + experiments_detail::fmt_g(t.alpha) +
                     " k=" + std::to_string(t.k));
  }
  const std::size_t T = plans.size();
  std::vector<std::vector<double>> targets(T, std::vector<double>(T, 0.0));
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t j = 0; j < T; ++j)
      targets[i][j] =
          (cfg.targets[i].alpha == cfg.targets[j].alpha)
              ? clt_covariance(cfg.targets[i].k, cfg.targets[j].k, cfg.beta)
              : 0.0;
  Report rep = experiments_detail::covariance_experiment(cfg, plans, labels,
                                                         targets);
  rep.experiment = "clt";
  rep.config["n"] = cfg.n;
  rep.config["beta"] = cfg.beta;
  rep.config["reps"] = cfg.reps;
  rep.config["seed"] = cfg.seed;
  {
    json ts = json::array();
    for (const Target& t : cfg.targets)
      ts.push_back(json{{"alpha", t.alpha}, {"k", t.k}});
    rep.config["targets"] = std::move(ts);
  }
  rep.metadata["centering"] = "exact finite-n means";
  rep.metadata["finite_n_note"] =
      "targets are large-n limits; n is chosen so the residual bias sits "
      "inside the max(5 SE, 5%) band";
  return rep;
}

/// Covariances of sqrt(n) (D_{n-c_i,k_i} - E D) across minor offsets c_i of
/// one sampled matrix; target (2 k l / beta) pi_{k+l-1, |c_i-c_j|+1}.
inline Report run_offset(const ExperimentConfig& cfg) {
  experiments_detail::check_common(cfg, true);
  std::vector<experiments_detail::TargetPlan> plans;
  std::vector<std::string> labels;
  for (const Target& t : cfg.targets) {
    if (t.offset < 0)
      throw std::invalid_argument("run_offset: offset must be >= 0");
    if (static_cast<std::size_t>(t.offset) + 2 > cfg.n)
      throw std::invalid_argument("run_offset: offset leaves no matrix");
    const std::size_t m = cfg.n - static_cast<std::size_t>(t.offset);
    const double center = expected_trace_diff(m, t.k, cfg.beta);
    plans.push_back(experiments_detail::make_plan(
        cfg.n, m, t.k, cfg.beta, center,
        std::sqrt(static_cast<double>(cfg.n))));
    labels.push_back("c=" + std::to_string(t.offset) +
                     " k=" + std::to_string(t.k));
  }
  const std::size_t T = plans.size();
  std::vector<std::vector<double>> targets(T, std::vector<double>(T, 0.0));
  for (std::size_t i = 0; i < T; ++i)
    for (std::size_t j = 0; j < T; ++j)
      targets[i][j] = offset_covariance(
          cfg.targets[i].k, cfg.targets[j].k,
          std::llabs(static_cast<long long>(cfg.targets[i].offset) -
                     static_cast<long long>(cfg.targets[j].offset)),
          cfg.beta);
  Report rep = experiments_detail::covariance_experiment(cfg, plans, labels,
                                                         targets);
  rep.experiment = "offset";
  rep.config["n"] = cfg.n;
  rep.config["beta"] = cfg.beta;
  rep.config["reps"] = cfg.reps;
  rep.config["seed"] = cfg.seed;
  {
    json ts = json::array();
    for (const Target& t : cfg.targets)
      ts.push_back(json{{"c", t.offset}, {"k", t.k}});
    rep.config["targets"] = std::move(ts);
  }
  rep.metadata["centering"] = "exact finite-n means";
  return rep;
}

/// sqrt(N)(A_N^2 - 1) for the rescaled top off-diagonal entry A_N: variance
/// against 2/beta, with skewness and excess-kurtosis decay checks. The
/// allowances are the exact chi-square cumulants of the finite-N law.
inline Report run_chilemma(const std::vector<std::size_t>& n_values,
                           double beta, std::size_t reps, std::uint64_t seed,
                           unsigned workers = 0) {
  if (n_values.empty())
    throw std::invalid_argument("run_chilemma: no sizes given");
  if (!(beta > 0.0))
    throw std::invalid_argument("run_chilemma: beta must be positive");
  if (reps < 2)
    throw std::invalid_argument("run_chilemma: reps must be >= 2");
  Report rep;
  rep.experiment = "chilemma";
  rep.config["beta"] = beta;
  rep.config["reps"] = reps;
  rep.config["seed"] = seed;
  {
    json ns = json::array();
    for (std::size_t n : n_values) ns.push_back(n);
    rep.config["n_values"] = std::move(ns);
  }
  const rng::Stream root(seed);
  for (std::size_t idx = 0; idx < n_values.size(); ++idx) {
    const std::size_t n = n_values[idx];
    if (n < 2)
      throw std::invalid_argument("run_chilemma: n must be >= 2");
    const double a = static_cast<double>(n - 1) * beta;
    const double nb = static_cast<double>(n) * beta;
    const double sqn = std::sqrt(static_cast<double>(n));
    const rng::Stream base = root.substream(idx);
    auto acc = experiments_detail::run_blocks<stats::ScalarMoments>(
        reps, workers, [] { return stats::ScalarMoments(); },
        [&](stats::ScalarMoments& m, std::size_t r) {
          rng::Stream s = base.substream(r);
          const double chi = sample_chi(a, s);
          const double a2 = chi * chi / nb;
          m.add(sqn * (a2 - 1.0));
        });
    const std::string tag = "[n=" + std::to_string(n) + "]";
    {
      ReportCell c;
      c.name = "var" + tag;
      c.estimate = acc.variance();
      c.se = acc.se_variance();
      c.target = 2.0 / beta;
      c.pass = std::fabs(c.estimate - c.target) <= 5.0 * c.se;
      c.extras.emplace_back("mean", acc.mean());
      rep.cells.push_back(std::move(c));
    }
    {
      ReportCell c;
      c.name = "skew" + tag;
      c.estimate = acc.skewness();
      c.se = acc.se_skewness();
      c.target = 0.0;
      const double allowance = std::sqrt(8.0 / a);
      c.pass = std::fabs(c.estimate) <= allowance + 5.0 * c.se;
      c.extras.emplace_back("finite_n_allowance", allowance);
      rep.cells.push_back(std::move(c));
    }
    {
      ReportCell c;
      c.name = "kurt" + tag;
      c.estimate = acc.kurtosis();
      c.se = acc.se_kurtosis();
      c.target = 3.0;
      const double allowance = 12.0 / a;
      c.pass = std::fabs(c.estimate - c.target) <= allowance + 5.0 * c.se;
      c.extras.emplace_back("finite_n_allowance", allowance);
      rep.cells.push_back(std::move(c));
    }
  }
  return rep;
}

/// Young-diagram convergence to the VKLS curve: per size, the median and
/// 90th-percentile sup distance over replicates; passing means the medians
/// fall along increasing n, the largest-n median is under 0.15, and the
/// diagram center z0 concentrates near 0.
inline Report run_young(const ExperimentConfig& cfg, double grid_step,
                        double window = 3.0) {
  if (!(grid_step > 0.0))
    throw std::invalid_argument("run_young: grid_step must be positive");
  if (!(window > 0.0))
    throw std::invalid_argument("run_young: window must be positive");
  if (!(cfg.beta > 0.0))
    throw std::invalid_argument("experiment config: beta must be positive");
  if (cfg.reps < 2)
    throw std::invalid_argument("experiment config: reps must be >= 2");
  std::vector<std::size_t> sizes =
      cfg.n_values.empty() ? std::vector<std::size_t>{cfg.n} : cfg.n_values;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (std::size_t n : sizes)
    if (n < 2) throw std::invalid_argument("run_young: n must be >= 2");

  struct YoungAcc {
    std::vector<double> sup, z0;
    void merge(const YoungAcc& o) {
      sup.insert(sup.end(), o.sup.begin(), o.sup.end());
      z0.insert(z0.end(), o.z0.begin(), o.z0.end());
    }
  };

  const rng::Stream root(cfg.seed);
  std::vector<double> med(sizes.size()), p90(sizes.size()),
      med_se(sizes.size()), z0_med(sizes.size()), z0_se(sizes.size());
  for (std::size_t idx = 0; idx < sizes.size(); ++idx) {
    const std::size_t n = sizes[idx];
    const rng::Stream base = root.substream(idx);
    auto acc = experiments_detail::run_blocks<YoungAcc>(
        cfg.reps, cfg.workers, [] { return YoungAcc{}; },
        [&](YoungAcc& a, std::size_t r) {
          const BetaHermiteDraw draw(n, cfg.beta, base.substream(r));
          std::vector<double> dg(n), of(n - 1);
          for (std::size_t i = 0; i < n; ++i) dg[i] = draw.diag(i + 1);
          for (std::size_t i = 0; i + 1 < n; ++i) of[i] = draw.offdiag(i + 1);
          const TridiagonalMatrix y =
              rescale(TridiagonalMatrix(std::move(dg), std::move(of)), n,
                      cfg.beta);
          const Spectrum outer = eigenvalues(y);
          const Spectrum inner = eigenvalues(minor_of(y));
          const double slack = 10.0 * std::max(outer.tol, inner.tol);
          const YoungDiagram d =
              build_diagram(outer.values, inner.values, slack);
          a.sup.push_back(sup_distance(d, grid_step, window));
          a.z0.push_back(d.z0());
        });
    med[idx] = stats::median(acc.sup);
    p90[idx] = stats::quantile(acc.sup, 0.9);
    med_se[idx] = experiments_detail::se_median(acc.sup);
    z0_med[idx] = stats::median(acc.z0);
    z0_se[idx] = experiments_detail::se_median(acc.z0);
  }

  Report rep;
  rep.experiment = "young";
  {
    json ns = json::array();
    for (std::size_t n : sizes) ns.push_back(n);
    rep.config["n_values"] = std::move(ns);
  }
  rep.config["beta"] = cfg.beta;
  rep.config["reps"] = cfg.reps;
  rep.config["seed"] = cfg.seed;
  rep.config["grid_step"] = grid_step;
  rep.config["window"] = window;
  for (std::size_t idx = 1; idx < sizes.size(); ++idx) {
    ReportCell c;
    c.name = "sup_decrease[" + std::to_string(sizes[idx - 1]) + "->" +
             std::to_string(sizes[idx]) + "]";
    c.estimate = med[idx] - med[idx - 1];
    c.se = std::sqrt(med_se[idx] * med_se[idx] +
                     med_se[idx - 1] * med_se[idx - 1]);
    c.target = 0.0;
    c.pass = c.estimate < 0.0;
    c.extras.emplace_back("median_from", med[idx - 1]);
    c.extras.emplace_back("median_to", med[idx]);
    c.extras.emplace_back("p90_to", p90[idx]);
    rep.cells.push_back(std::move(c));
  }
  {
    const std::size_t last = sizes.size() - 1;
    ReportCell c;
    c.name = "sup_final[n=" + std::to_string(sizes[last]) + "]";
    c.estimate = med[last];
    c.se = med_se[last];
    c.target = 0.15;
    c.pass = c.estimate < c.target;
    c.extras.emplace_back("p90", p90[last]);
    rep.cells.push_back(std::move(c));

    ReportCell z;
    z.name = "z0[n=" + std::to_string(sizes[last]) + "]";
    z.estimate = z0_med[last];
    z.se = z0_se[last];
    z.target = 0.0;
    z.pass = std::fabs(z.estimate) < 0.05;
    z.extras.emplace_back("threshold", 0.05);
    rep.cells.push_back(std::move(z));
  }
  {
    json jm = json::array(), jp = json::array(), jz = json::array();
    for (std::size_t idx = 0; idx < sizes.size(); ++idx) {
      jm.push_back(med[idx]);
      jp.push_back(p90[idx]);
      jz.push_back(z0_med[idx]);
    }
    rep.metadata["sup_median"] = std::move(jm);
    rep.metadata["sup_p90"] = std::move(jp);
    rep.metadata["z0_median"] = std::move(jz);
  }
  return rep;
}

/// Marginal Gaussianity of sqrt(n)(D_{n,k} - E D): standardized third and
/// fourth moments against 0 and 3 inside 5 SE bands. Finite-n skew decays
/// like 1/sqrt(n), so n must be large enough for the band; see the CLI
/// default.
inline Report run_normality(const ExperimentConfig& cfg) {
  experiments_detail::check_common(cfg, true);
  const std::size_t T = cfg.targets.size();
  std::vector<experiments_detail::TargetPlan> plans;
  for (const Target& t : cfg.targets) {
    const double center = expected_trace_diff(cfg.n, t.k, cfg.beta);
    plans.push_back(experiments_detail::make_plan(
        cfg.n, cfg.n, t.k, cfg.beta, center,
        std::sqrt(static_cast<double>(cfg.n))));
  }
  const rng::Stream root(cfg.seed);
  using experiments_detail::MultiMoments;
  auto acc = experiments_detail::run_blocks<MultiMoments>(
      cfg.reps, cfg.workers,
      [T] {
        MultiMoments m;
        m.ms.resize(T);
        return m;
      },
      [&](MultiMoments& a, std::size_t rep) {
        const BetaHermiteDraw draw(cfg.n, cfg.beta,
                                            root.substream(rep));
        std::vector<double> dbuf, obuf;
        for (std::size_t i = 0; i < T; ++i)
          a.ms[i].add(experiments_detail::eval_plan(draw, plans[i], dbuf, obuf));
      });

  Report rep;
  rep.experiment = "normality";
  rep.config["n"] = cfg.n;
  rep.config["beta"] = cfg.beta;
  rep.config["reps"] = cfg.reps;
  rep.config["seed"] = cfg.seed;
  {
    json ks = json::array();
    for (const Target& t : cfg.targets) ks.push_back(t.k);
    rep.config["k"] = std::move(ks);
  }
  for (std::size_t i = 0; i < T; ++i) {
    const stats::ScalarMoments& m = acc.ms[i];
    const std::string tag = "[k=" + std::to_string(cfg.targets[i].k) + "]";
    {
      ReportCell c;
      c.name = "skew" + tag;
      c.estimate = m.skewness();
      c.se = m.se_skewness();
      c.target = 0.0;
      c.pass = std::fabs(c.estimate) <= 5.0 * c.se;
      c.extras.emplace_back("mean", m.mean());
      c.extras.emplace_back("variance", m.variance());
      rep.cells.push_back(std::move(c));
    }
    {
      ReportCell c;
      c.name = "kurt" + tag;
      c.estimate = m.kurtosis();
      c.se = m.se_kurtosis();
      c.target = 3.0;
      c.pass = std::fabs(c.estimate - c.target) <= 5.0 * c.se;
      rep.cells.push_back(std::move(c));
    }
  }
  return rep;
}

}
