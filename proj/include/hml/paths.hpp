#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "hml/combinatorics.hpp"
#include "hml/errors.hpp"

namespace hml::paths {

/// A cyclic path is its vertex sequence (i_1, ..., i_k), levels >= 1; the
/// closing step i_k -> i_1 is implicit. Linear paths reuse the same vector
/// with no closing step.
using Path = std::vector<int>;

/// No cyclic path of length k through level 1 can climb past this level.
inline int window_cap(int k) { return (k + 1) / 2 + 1; }

/// Levels h where sigma(k, h) can be nonzero: h = 1 .. ceil((k+1)/2).
inline int level_count(int k) { return (k + 2) / 2; }

inline int default_budget() {
  if (const char* env = std::getenv("HML_BUDGET")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 16;
}

namespace detail {
inline int& budget_slot() {
  static int b = default_budget();
  return b;
}
}

/// Exhaustive-enumeration cap on path length. HML_BUDGET overrides the
/// default of 16 at startup; set_budget overrides at runtime.
inline int budget() { return detail::budget_slot(); }
inline void set_budget(int k) { detail::budget_slot() = k; }

namespace detail {

inline void require_budget(int k, const char* where) {
  if (k < 0)
    throw std::invalid_argument(std::string(where) + ": negative path length");
  if (k > budget())
    throw ResourceError(std::string(where) + ": path length " +
                        std::to_string(k) + " exceeds enumeration budget " +
                        std::to_string(budget()) +
                        " (HML_BUDGET raises it)");
}

/// DFS over cyclic paths of length k: levels in [1, cap], steps in
/// {-1, 0, +1}, level 1 visited. max_diag bounds the number of diagonal
/// (stay) steps, closing step included; -1 means unbounded. fixed_start
/// pins i_1, fixed_second pins i_2 (0 = free). fn sees each complete path.
template <class Fn>
void cyclic_dfs(int k, int cap, int max_diag, int fixed_start,
                int fixed_second, Fn&& fn) {
  if (k < 1) return;
  Path p(static_cast<std::size_t>(k));
  auto rec = [&](auto&& self, int idx, int min_seen, int diag_used) -> void {
    const int cur = p[idx];
    const int start = p[0];
    if (idx == k - 1) {
      const int d = std::abs(cur - start);
      if (d > 1) return;
      if (max_diag >= 0 && diag_used + (d == 0 ? 1 : 0) > max_diag) return;
      if (min_seen != 1) return;
      fn(const_cast<const Path&>(p));
      return;
    }
    const int rem_after = k - idx - 1;  // steps left after the one we place
    for (int step = -1; step <= 1; ++step) {
      const int nxt = cur + step;
      if (nxt < 1 || nxt > cap) continue;
      if (idx == 0 && fixed_second > 0 && nxt != fixed_second) continue;
      const int ndiag = diag_used + (step == 0 ? 1 : 0);
      if (max_diag >= 0 && ndiag > max_diag) continue;
      const int nmin = std::min(min_seen, nxt);
      // must still close the cycle, and dip to level 1 if we have not
      const int need =
          nmin == 1 ? std::abs(nxt - start) : (nxt - 1) + (start - 1);
      if (need > rem_after) continue;
      p[static_cast<std::size_t>(idx) + 1] = nxt;
      self(self, idx + 1, nmin, ndiag);
    }
  };
  const int s_lo = fixed_start > 0 ? fixed_start : 1;
  const int s_hi = fixed_start > 0 ? fixed_start : cap;
  for (int s = s_lo; s <= s_hi; ++s) {
    if (s < 1 || s > cap) continue;
    if (2 * (s - 1) > k) continue;  // cannot reach level 1 and return
    p[0] = s;
    rec(rec, 0, s, 0);
  }
}

}

/// Per-level step counts of a cyclic path. m[h-1] counts diagonal (h,h)
/// steps; ell[h-1] counts ordered up-steps (h,h+1) only. Down-steps are not
/// counted separately: the cycle closes, so (h+1,h) hits equal ell[h-1] and
/// the entry product takes offdiag powers 2*ell.
struct PathStats {
  std::vector<int> m;
  std::vector<int> ell;
};

inline PathStats path_stats(const Path& p) {
  if (p.empty()) throw std::invalid_argument("path_stats: empty path");
  const int k = static_cast<int>(p.size());
  const int top = *std::max_element(p.begin(), p.end());
  PathStats st;
  st.m.assign(static_cast<std::size_t>(top), 0);
  st.ell.assign(static_cast<std::size_t>(top), 0);
  for (int j = 0; j < k; ++j) {
    const int a = p[static_cast<std::size_t>(j)];
    const int b = p[static_cast<std::size_t>((j + 1) % k)];
    if (b == a)
      ++st.m[static_cast<std::size_t>(a - 1)];
    else if (b == a + 1)
      ++st.ell[static_cast<std::size_t>(a - 1)];
  }
  return st;
}

/// Lambda_k: all cyclic paths of length k through level 1.
inline std::vector<Path> enumerate_lambda(int k) {
  detail::require_budget(k, "enumerate_lambda");
  if (k == 0) return {};
  std::vector<Path> out;
  const int cap = window_cap(k);
  detail::cyclic_dfs(k, cap, -1, 0, 0, [&](const Path& p) {
    assert(*std::max_element(p.begin(), p.end()) <= cap);
    out.push_back(p);
  });
  return out;
}

/// D_k: the strict-step subset of Lambda_k. Empty for odd k.
inline std::vector<Path> enumerate_D(int k) {
  detail::require_budget(k, "enumerate_D");
  std::vector<Path> out;
  if (k == 0 || k % 2 == 1) return out;
  detail::cyclic_dfs(k, window_cap(k), 0, 0, 0,
                     [&](const Path& p) { out.push_back(p); });
  return out;
}

namespace detail {

inline std::vector<long long> sigma_row_uncached(int k) {
  std::vector<long long> row(static_cast<std::size_t>(level_count(k)), 0);
  const int cap = window_cap(k);
  if (k % 2 == 1) {
    // exactly one diagonal step; its level is h
    cyclic_dfs(k, cap, 1, 0, 0, [&](const Path& p) {
      PathStats st = path_stats(p);
      int total = 0, level = 0;
      for (std::size_t h = 0; h < st.m.size(); ++h) {
        total += st.m[h];
        if (st.m[h] > 0) level = static_cast<int>(h) + 1;
      }
      if (total != 1) return;
      if (level <= static_cast<int>(row.size())) ++row[level - 1];
    });
  } else {
    cyclic_dfs(k, cap, 0, 0, 0, [&](const Path& p) {
      PathStats st = path_stats(p);
      for (std::size_t h = 0; h < st.ell.size() && h < row.size(); ++h)
        row[h] += st.ell[h];
    });
  }
  return row;
}

inline std::vector<long long> pi_row_uncached(int k) {
  std::vector<long long> row(static_cast<std::size_t>(level_count(k)), 0);
  if (k == 1) {
    row[0] = 1;  // sigma_{1,1} = 1 = k * pi_{1,1}
    return row;
  }
  for (int h = 1; h <= level_count(k); ++h) {
    long long cnt = 0;
    if (k % 2 == 1) {
      // anchored strict cycles of length k-1 starting at level h
      cyclic_dfs(k - 1, window_cap(k - 1), 0, h, 0,
                 [&](const Path&) { ++cnt; });
    } else {
      // anchored strict cycles of length k whose first step is (h, h+1)
      cyclic_dfs(k, window_cap(k), 0, h, h + 1, [&](const Path&) { ++cnt; });
    }
    row[static_cast<std::size_t>(h - 1)] = cnt;
  }
  return row;
}

inline const std::vector<long long>& cached_row(
    int k, std::vector<long long> (*builder)(int),
    std::map<int, std::vector<long long>>& cache, std::mutex& mu) {
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, builder(k)).first;
  return it->second;
}

}

/// sigma_{k,h} for h = 1..level_count(k). Odd k: paths in Lambda_k with
/// exactly one diagonal step, located at level h. Even k: total ordered
/// (h,h+1) hit count over D_k.
inline std::vector<long long> sigma_row(int k) {
  detail::require_budget(k, "sigma");
  if (k == 0) return {};
  static std::map<int, std::vector<long long>> cache;
  static std::mutex mu;
  return detail::cached_row(k, detail::sigma_row_uncached, cache, mu);
}

inline long long sigma(int k, int h) {
  if (h < 1) throw std::invalid_argument("sigma: h must be >= 1");
  auto row = sigma_row(k);
  if (h > static_cast<int>(row.size())) return 0;
  return row[static_cast<std::size_t>(h - 1)];
}

/// pi_{k,h}: anchored strict path counts. Odd k: cycles of length k-1 with
/// first vertex h. Even k: cycles of length k with first step (h,h+1).
inline std::vector<long long> pi_row(int k) {
  detail::require_budget(k, "pi");
  if (k == 0) return {};
  static std::map<int, std::vector<long long>> cache;
  static std::mutex mu;
  return detail::cached_row(k, detail::pi_row_uncached, cache, mu);
}

inline long long pi(int k, int h) {
  if (h < 1) throw std::invalid_argument("pi: h must be >= 1");
  auto row = pi_row(k);
  if (h > static_cast<int>(row.size())) return 0;
  return row[static_cast<std::size_t>(h - 1)];
}

/// Forced endpoint of the C family: 2h-1 for an even number of edges,
/// 2h for an odd number.
inline int c_endpoint(int edges, int h) { return 2 * h - 1 + (edges % 2); }

/// C_{edges}^h: strict unit-step paths on {1,2,...} with the given number
/// of edges, from 1 to the forced endpoint.
inline std::vector<Path> enumerate_C(int edges, int h) {
  detail::require_budget(edges, "enumerate_C");
  if (h < 1) throw std::invalid_argument("enumerate_C: h must be >= 1");
  std::vector<Path> out;
  const int end = c_endpoint(edges, h);
  Path p(static_cast<std::size_t>(edges) + 1);
  p[0] = 1;
  auto rec = [&](auto&& self, int idx) -> void {
    const int cur = p[static_cast<std::size_t>(idx)];
    const int rem = edges - idx;
    if (rem == 0) {
      if (cur == end) out.push_back(p);
      return;
    }
    if (std::abs(cur - end) > rem) return;
    for (int step = -1; step <= 1; step += 2) {
      const int nxt = cur + step;
      if (nxt < 1) continue;
      p[static_cast<std::size_t>(idx) + 1] = nxt;
      self(self, idx + 1);
    }
  };
  rec(rec, 0);
  return out;
}

/// Rotation bijection from anchored strict cycles to the C family: split the
/// cycle at its first visit of level 1, replay the tail, then walk the head
/// backwards lifted by h-1. Input: d cyclic strict, d[0] = h, visits 1.
inline Path rotate_to_C(const Path& d, int h) {
  if (d.empty() || d[0] != h)
    throw std::invalid_argument("rotate_to_C: path must start at level h");
  const std::size_t k = d.size();
  std::size_t a = k;
  for (std::size_t j = 0; j < k; ++j) {
    if (d[j] == 1) {
      a = j;
      break;
    }
  }
  if (a == k) throw std::invalid_argument("rotate_to_C: path never visits 1");
  Path c;
  c.reserve(k + 1);
  for (std::size_t j = a; j < k; ++j) c.push_back(d[j]);
  for (std::size_t j = a + 1; j-- > 0;) c.push_back(d[j] + h - 1);
  return c;
}

/// Inverse of rotate_to_C. The cut is the last index where c equals h: the
/// lifted head lies strictly above h after its first element.
inline Path rotate_from_C(const Path& c, int h) {
  if (c.size() < 1 || c.front() != 1)
    throw std::invalid_argument("rotate_from_C: path must start at 1");
  std::size_t m = c.size();
  for (std::size_t j = c.size(); j-- > 0;) {
    if (c[j] == h) {
      m = j;
      break;
    }
  }
  if (m == c.size())
    throw std::invalid_argument("rotate_from_C: no cut point at level h");
  Path d;
  d.reserve(c.size() - 1);
  for (std::size_t j = c.size(); j-- > m + 1;) d.push_back(c[j] - (h - 1));
  for (std::size_t j = 0; j < m; ++j) d.push_back(c[j]);
  return d;
}

/// Sum over levels of sigma_{k1,h} sigma_{k2,h}; the lemma's closed form
/// 2 k1 k2 / (k1+k2) * binom(k1+k2-2, (k1+k2-2)/2) is asserted on the way
/// out, so a silent enumeration bug cannot slip through.
inline std::uint64_t combo_sum(int k1, int k2) {
  if (k1 < 1 || k2 < 1)
    throw std::invalid_argument("combo_sum: k1, k2 must be >= 1");
  if ((k1 + k2) % 2 != 0)
    throw std::invalid_argument("combo_sum: k1 and k2 must share parity");
  auto r1 = sigma_row(k1);
  auto r2 = sigma_row(k2);
  std::uint64_t sum = 0;
  const std::size_t levels = std::min(r1.size(), r2.size());
  for (std::size_t h = 0; h < levels; ++h)
    sum += static_cast<std::uint64_t>(r1[h]) * static_cast<std::uint64_t>(r2[h]);
  const int L = k1 + k2 - 2;
  uint128 num = static_cast<uint128>(2) * k1 * k2 * binomial_u128(L, L / 2);
  if (num % static_cast<uint128>(k1 + k2) != 0)
    throw std::logic_error("combo_sum: closed form not integral");
  uint128 closed = num / static_cast<uint128>(k1 + k2);
  if (closed != static_cast<uint128>(sum))
    throw std::logic_error("combo_sum: enumeration disagrees with closed form");
  return sum;
}

}
