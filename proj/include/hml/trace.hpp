#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hml/combinatorics.hpp"
#include "hml/paths.hpp"
#include "hml/tridiagonal.hpp"

namespace hml {

enum class TraceMethod { path_sum, spectral };

struct TraceDiffResult {
  int k;
  double value;
  TraceMethod method;
};

/// tr T^k by repeated banded multiplication. The band widens by one per
/// multiply, capped at the dimension; cost O(k^2 dim) at desk scale.
inline double trace_power(const TridiagonalMatrix& t, int k) {
  if (k < 0) throw std::invalid_argument("trace_power: k must be >= 0");
  const std::size_t n = t.dim();
  if (k == 0) return static_cast<double>(n);
  double s = 0.0;
  if (k == 1) {
    for (double v : t.diag) s += v;
    return s;
  }
  const int maxbw = static_cast<int>(n) - 1;
  int bw = std::min(1, maxbw);
  // band[o + bw][i] = (T^j)_{i, i+o}
  std::vector<std::vector<double>> band(2 * bw + 1,
                                        std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) band[bw][i] = t.diag[i];
  if (bw >= 1)
    for (std::size_t i = 0; i + 1 < n; ++i) {
      band[bw + 1][i] = t.offdiag[i];
      band[bw - 1][i + 1] = t.offdiag[i];
    }
  auto get = [&](int o, std::size_t i) -> double {
    if (o < -bw || o > bw) return 0.0;
    const long long j = static_cast<long long>(i) + o;
    if (j < 0 || j >= static_cast<long long>(n)) return 0.0;
    return band[o + bw][i];
  };
  for (int step = 2; step <= k; ++step) {
    const int nbw = std::min(bw + 1, maxbw);
    std::vector<std::vector<double>> next(2 * nbw + 1,
                                          std::vector<double>(n, 0.0));
    for (int o = -nbw; o <= nbw; ++o) {
      for (std::size_t i = 0; i < n; ++i) {
        const long long j = static_cast<long long>(i) + o;
        if (j < 0 || j >= static_cast<long long>(n)) continue;
        double acc = get(o, i) * t.diag[j];
        if (j >= 1) acc += get(o - 1, i) * t.offdiag[j - 1];
        if (j + 1 < static_cast<long long>(n)) acc += get(o + 1, i) * t.offdiag[j];
        next[o + nbw][i] = acc;
      }
    }
    band = std::move(next);
    bw = nbw;
  }
  for (std::size_t i = 0; i < n; ++i) s += band[bw][i];
  return s;
}

/// D_{N,k} = tr Y^k - tr(minor Y)^k expanded over the cyclic paths through
/// index 1, grouped by per-level entry exponents. The polynomial depends
/// only on (k, value cap), never on N, which is the window reduction: one
/// term list serves every matrix size.
class TracePolynomial {
public:
  struct Term {
    long long coeff;
    std::vector<int> dpow;  // exponent of diag entry at level j+1
    std::vector<int> lpow;  // half-exponent of offdiag (j+1,j+2): entry^(2l)
  };

  int k() const { return k_; }
  int window() const { return window_; }
  const std::vector<Term>& terms() const { return terms_; }

  static const TracePolynomial& get(int k, int value_cap) {
    static std::map<std::pair<int, int>, std::unique_ptr<TracePolynomial>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(k, value_cap);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, std::unique_ptr<TracePolynomial>(
                                  new TracePolynomial(k, value_cap)))
               .first;
    return *it->second;
  }

  /// Evaluate on window entries: diag[j] = Y(j+1,j+1), off[j] = Y(j+1,j+2).
  /// Only the first window() diag slots and window()-1 off slots are read.
  double eval(const double* diag, const double* off) const {
    double sum = 0.0;
    for (const Term& t : terms_) {
      double p = static_cast<double>(t.coeff);
      for (std::size_t j = 0; j < t.dpow.size(); ++j)
        p *= ipow(diag[j], t.dpow[j]);
      for (std::size_t j = 0; j < t.lpow.size(); ++j)
        p *= ipow(off[j], 2 * t.lpow[j]);
      sum += p;
    }
    return sum;
  }

  /// E D_{n,k} for Y_n: diagonal entries N(0, 2/(n beta)), off-diagonal
  /// entry (j,j+1) with squared law chi^2_{(n-j) beta} / (n beta). Gaussian
  /// odd moments kill every term with an odd diagonal exponent; the rest is
  /// a product of double factorials and rising chi-square moment factors.
  double expectation(std::size_t n, double beta) const {
    const double nb = static_cast<double>(n) * beta;
    const double dvar = 2.0 / nb;
    double sum = 0.0;
    for (const Term& t : terms_) {
      bool odd = false;
      for (int p : t.dpow)
        if (p % 2 == 1) {
          odd = true;
          break;
        }
      if (odd) continue;
      double val = static_cast<double>(t.coeff);
      for (std::size_t j = 0; j < t.dpow.size(); ++j) {
        const int half = t.dpow[j] / 2;
        if (half > 0) val *= double_factorial_odd(half) * ipow(dvar, half);
      }
      for (std::size_t j = 0; j < t.lpow.size(); ++j) {
        const int l = t.lpow[j];
        if (l == 0) continue;
        const double a = static_cast<double>(n - (j + 1)) * beta;
        for (int r = 0; r < l; ++r) val *= a + 2.0 * r;
        val /= ipow(nb, l);
      }
      sum += val;
    }
    return sum;
  }

private:
  TracePolynomial(int k, int value_cap) : k_(k), window_(value_cap) {
    if (k == 0) {
      window_ = 0;
      terms_.push_back(Term{1, {}, {}});
      return;
    }
    paths::detail::require_budget(k, "trace polynomial");
    std::map<std::vector<int>, long long> grouped;
    paths::detail::cyclic_dfs(
        k, value_cap, -1, 0, 0, [&](const paths::Path& p) {
          paths::PathStats st = paths::path_stats(p);
          std::vector<int> key(2 * static_cast<std::size_t>(value_cap), 0);
          for (std::size_t h = 0; h < st.m.size(); ++h) key[h] = st.m[h];
          for (std::size_t h = 0; h < st.ell.size(); ++h)
            key[static_cast<std::size_t>(value_cap) + h] = st.ell[h];
          ++grouped[key];
        });
    for (const auto& [key, count] : grouped) {
      Term t;
      t.coeff = count;
      t.dpow.assign(key.begin(), key.begin() + window_);
      t.lpow.assign(key.begin() + window_, key.end());
      while (!t.lpow.empty() && t.lpow.back() == 0) t.lpow.pop_back();
      terms_.push_back(std::move(t));
    }
  }

  static double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  }

  int k_;
  int window_;
  std::vector<Term> terms_;
};

namespace detail {

/// Reference evaluator: walk every cyclic path and multiply entries, no
/// grouping. Oracle for the grouped polynomial.
inline double trace_diff_path_by_path(const TridiagonalMatrix& y, int k) {
  if (k == 0) return 1.0;
  const int cap = static_cast<int>(
      std::min<std::size_t>(paths::window_cap(k), y.dim()));
  double sum = 0.0;
  paths::detail::cyclic_dfs(k, cap, -1, 0, 0, [&](const paths::Path& p) {
    double prod = 1.0;
    const std::size_t len = p.size();
    for (std::size_t j = 0; j < len; ++j) {
      const int a = p[j];
      const int b = p[(j + 1) % len];
      if (b == a)
        prod *= y.diag[static_cast<std::size_t>(a - 1)];
      else
        prod *= y.offdiag[static_cast<std::size_t>(std::min(a, b) - 1)];
    }
    sum += prod;
  });
  return sum;
}

}

/// Trace difference between Y and its first-minor. The path_sum route needs
/// only the top window of the matrix and respects the enumeration budget;
/// the spectral route subtracts banded trace powers and always works.
inline TraceDiffResult trace_diff(const TridiagonalMatrix& y, int k,
                                  TraceMethod method = TraceMethod::path_sum) {
  if (y.dim() < 2) throw std::invalid_argument("trace_diff: need dim >= 2");
  if (k < 0) throw std::invalid_argument("trace_diff: k must be >= 0");
  if (method == TraceMethod::spectral) {
    const double v = trace_power(y, k) - trace_power(minor_of(y), k);
    return {k, v, method};
  }
  const int cap = static_cast<int>(
      std::min<std::size_t>(paths::window_cap(k), y.dim()));
  const TracePolynomial& poly = TracePolynomial::get(k, cap);
  return {k, poly.eval(y.diag.data(), y.offdiag.data()), method};
}

/// Exact E D_{n,k} under the rescaled ensemble Y_n. Odd k vanishes by
/// Gaussian symmetry. Even k is a finite sum of moment products over the
/// trace polynomial; no sampling, no quadrature.
inline double expected_trace_diff(std::size_t n, int k, double beta) {
  if (n < 2)
    throw std::invalid_argument("expected_trace_diff: n must be >= 2");
  if (!(beta > 0.0))
    throw std::invalid_argument("expected_trace_diff: beta must be positive");
  if (k < 0) throw std::invalid_argument("expected_trace_diff: k must be >= 0");
  if (k % 2 == 1) return 0.0;
  const int cap = static_cast<int>(
      std::min<std::size_t>(paths::window_cap(k), n));
  return TracePolynomial::get(k, cap).expectation(n, beta);
}

}
