#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "hml/combinatorics.hpp"
#include "hml/errors.hpp"
#include "hml/paths.hpp"

namespace paths = hml::paths;
using paths::Path;

namespace {

// product-space enumeration: every vertex tuple in [1, cap]^k, filtered.
// No pruning, no recursion; the slow mirror of the DFS.
std::set<Path> brute_cyclic(int k, int cap, bool strict) {
  std::set<Path> out;
  Path p(k, 1);
  for (;;) {
    bool ok = true;
    int mn = p[0];
    for (int j = 0; j < k && ok; ++j) {
      const int a = p[j], b = p[(j + 1) % k];
      const int d = std::abs(a - b);
      if (d > 1 || (strict && d != 1)) ok = false;
      mn = std::min(mn, p[j]);
    }
    if (ok && mn == 1) out.insert(p);
    int j = k - 1;
    while (j >= 0 && p[j] == cap) p[j--] = 1;
    if (j < 0) break;
    ++p[j];
  }
  return out;
}

std::set<Path> as_set(const std::vector<Path>& v) {
  return std::set<Path>(v.begin(), v.end());
}

// visits of level h, with the first vertex counted twice
int rho(const Path& p, int h) {
  int c = p[0] == h ? 1 : 0;
  for (int v : p)
    if (v == h) ++c;
  return c;
}

Path min_rotation(const Path& p) {
  Path best = p;
  Path r = p;
  for (std::size_t j = 1; j < p.size(); ++j) {
    std::rotate(r.begin(), r.begin() + 1, r.end());
    best = std::min(best, r);
  }
  return best;
}

}

TEST_CASE("window cap and level counts") {
  CHECK(paths::window_cap(1) == 2);
  CHECK(paths::window_cap(2) == 2);
  CHECK(paths::window_cap(3) == 3);
  CHECK(paths::window_cap(4) == 3);
  CHECK(paths::window_cap(8) == 5);
  CHECK(paths::level_count(1) == 1);
  CHECK(paths::level_count(2) == 2);
  CHECK(paths::level_count(3) == 2);
  CHECK(paths::level_count(4) == 3);
}

TEST_CASE("cyclic enumeration matches product-space brute force") {
  for (int k = 1; k <= 8; ++k) {
    const auto got = as_set(paths::enumerate_lambda(k));
    // brute force over a taller box proves the window cap loses nothing
    const auto want = brute_cyclic(k, paths::window_cap(k) + 2, false);
    CHECK(got == want);
    for (const Path& p : got)
      CHECK(*std::max_element(p.begin(), p.end()) <= (k + 1) / 2 + 1);
  }
  CHECK(paths::enumerate_lambda(0).empty());
}

TEST_CASE("strict subset matches brute force and parity") {
  for (int k = 1; k <= 9; ++k) {
    const auto got = as_set(paths::enumerate_D(k));
    if (k % 2 == 1) {
      CHECK(got.empty());
    } else {
      CHECK(got == brute_cyclic(k, paths::window_cap(k) + 2, true));
    }
  }
}

TEST_CASE("path stats conserve the step count") {
  for (int k = 1; k <= 8; ++k) {
    for (const Path& p : paths::enumerate_lambda(k)) {
      const paths::PathStats st = paths::path_stats(p);
      int m = 0, ell = 0;
      for (int v : st.m) m += v;
      for (int v : st.ell) ell += v;
      CHECK(m + 2 * ell == k);
    }
  }
  CHECK_THROWS_AS(paths::path_stats(Path{}), std::invalid_argument);
}

TEST_CASE("small sigma and pi rows by hand") {
  CHECK(paths::sigma(1, 1) == 1);
  CHECK(paths::sigma(2, 1) == 2);
  CHECK(paths::sigma(2, 2) == 0);
  CHECK(paths::sigma(3, 1) == 3);
  CHECK(paths::sigma(3, 2) == 3);
  CHECK(paths::pi(1, 1) == 1);
  CHECK(paths::pi(2, 1) == 1);
  CHECK(paths::pi(2, 2) == 0);
  CHECK(paths::pi(3, 1) == 1);
  CHECK(paths::pi(3, 2) == 1);
  CHECK(paths::pi(4, 1) == 2);
  CHECK(paths::pi(4, 2) == 1);
  // beyond the stored row everything is zero
  CHECK(paths::sigma(2, 9) == 0);
  CHECK(paths::pi(3, 9) == 0);
  CHECK_THROWS_AS(paths::sigma(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(paths::pi(2, 0), std::invalid_argument);
}

TEST_CASE("sigma equals k times pi on every level") {
  for (int k = 1; k <= 9; ++k) {
    const auto s = paths::sigma_row(k);
    const auto p = paths::pi_row(k);
    REQUIRE(s.size() == p.size());
    for (std::size_t h = 0; h < s.size(); ++h) CHECK(s[h] == k * p[h]);
  }
}

TEST_CASE("rotation classes: summed hit counts count anchored members") {
  // per cyclic class of strict length-2k paths, the rho sum over members
  // equals (2k+1) times the members whose first vertex is h
  for (int twok = 2; twok <= 10; twok += 2) {
    const auto d = paths::enumerate_D(twok);
    std::map<Path, std::vector<Path>> classes;
    for (const Path& p : d) classes[min_rotation(p)].push_back(p);
    for (int h = 1; h <= paths::window_cap(twok); ++h) {
      for (const auto& [rep, members] : classes) {
        long long sum = 0, anchored = 0;
        for (const Path& p : members) {
          sum += rho(p, h);
          if (p[0] == h) ++anchored;
        }
        CHECK(sum == (twok + 1) * anchored);
      }
    }
  }
}

TEST_CASE("sigma for odd powers aggregates hit counts over strict paths") {
  // sigma_{2k+1,h} = sum of rho over strict length-2k paths
  for (int twok = 2; twok <= 8; twok += 2) {
    const auto d = paths::enumerate_D(twok);
    const auto row = paths::sigma_row(twok + 1);
    for (int h = 1; h <= static_cast<int>(row.size()); ++h) {
      long long sum = 0;
      for (const Path& p : d) sum += rho(p, h);
      CHECK(row[h - 1] == sum);
    }
  }
}

TEST_CASE("endpoint formula and unit-step family") {
  CHECK(paths::c_endpoint(2, 1) == 1);
  CHECK(paths::c_endpoint(3, 1) == 2);
  CHECK(paths::c_endpoint(4, 2) == 3);
  const auto c21 = paths::enumerate_C(2, 1);
  REQUIRE(c21.size() == 1);
  CHECK(c21[0] == Path{1, 2, 1});
  const auto c42 = paths::enumerate_C(4, 2);
  CHECK(c42.size() == 3);
  for (const Path& p : c42) {
    REQUIRE(p.size() == 5);
    CHECK(p.front() == 1);
    CHECK(p.back() == 3);
    for (std::size_t j = 0; j + 1 < p.size(); ++j)
      CHECK(std::abs(p[j] - p[j + 1]) == 1);
  }
  CHECK(paths::enumerate_C(0, 1).size() == 1);
  CHECK_THROWS_AS(paths::enumerate_C(2, 0), std::invalid_argument);
}

TEST_CASE("pi counts the unit-step family") {
  for (int k = 2; k <= 9; ++k) {
    const auto row = paths::pi_row(k);
    for (int h = 1; h <= static_cast<int>(row.size()); ++h)
      CHECK(row[h - 1] ==
            static_cast<long long>(paths::enumerate_C(k - 1, h).size()));
  }
}

TEST_CASE("rotation maps are mutually inverse bijections") {
  for (int twok = 2; twok <= 8; twok += 2) {
    for (int h = 1; h <= paths::window_cap(twok); ++h) {
      // anchored strict cycles starting at h
      std::vector<Path> anchored;
      for (const Path& p : paths::enumerate_D(twok))
        if (p[0] == h) anchored.push_back(p);
      std::set<Path> images;
      for (const Path& p : anchored) {
        const Path c = paths::rotate_to_C(p, h);
        REQUIRE(c.size() == p.size() + 1);
        CHECK(c.front() == 1);
        CHECK(c.back() == 2 * h - 1);
        CHECK(paths::rotate_from_C(c, h) == p);
        images.insert(c);
      }
      CHECK(images.size() == anchored.size());  // injective
      // image lands exactly on the unit-step family with 2k edges
      const auto target = as_set(paths::enumerate_C(twok, h));
      for (const Path& c : images) CHECK(target.count(c) == 1);
      CHECK(images.size() == target.size());  // and is all of it
    }
  }
  CHECK_THROWS_AS(paths::rotate_to_C(Path{2, 3, 2, 3}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(paths::rotate_to_C(Path{1, 2}, 2), std::invalid_argument);
  CHECK_THROWS_AS(paths::rotate_from_C(Path{2, 3}, 2), std::invalid_argument);
}

TEST_CASE("gluing the unit-step families reproduces the Catalan numbers") {
  for (int k1 = 1; k1 <= 6; ++k1) {
    for (int k2 = k1; k2 <= 6; ++k2) {
      if ((k1 + k2) % 2 != 0 || k1 + k2 > 12) continue;
      long long pairs = 0;
      const auto r1 = paths::pi_row(k1);
      const auto r2 = paths::pi_row(k2);
      for (std::size_t h = 0; h < std::min(r1.size(), r2.size()); ++h)
        pairs += r1[h] * r2[h];
      CHECK(pairs ==
            static_cast<long long>(hml::catalan((k1 + k2 - 2) / 2)));
    }
  }
}

TEST_CASE("sigma pairing sum hits the closed form") {
  CHECK(paths::combo_sum(1, 1) == 1);
  CHECK(paths::combo_sum(2, 2) == 4);
  CHECK(paths::combo_sum(3, 3) == 18);
  CHECK(paths::combo_sum(1, 3) == 3);
  for (int k1 = 1; k1 <= 8; ++k1)
    for (int k2 = k1; k2 <= 8; ++k2)
      if ((k1 + k2) % 2 == 0)
        CHECK(paths::combo_sum(k1, k2) ==
              static_cast<std::uint64_t>(k1) * k2 *
                  hml::catalan((k1 + k2 - 2) / 2));
  CHECK_THROWS_AS(paths::combo_sum(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(paths::combo_sum(0, 2), std::invalid_argument);
}

TEST_CASE("enumeration budget guards the exponential work") {
  const int saved = paths::budget();
  paths::set_budget(4);
  CHECK_THROWS_AS(paths::enumerate_lambda(5), hml::ResourceError);
  CHECK_THROWS_AS(paths::sigma_row(6), hml::ResourceError);
  CHECK_THROWS_AS(paths::enumerate_C(5, 1), hml::ResourceError);
  CHECK_NOTHROW(paths::enumerate_lambda(4));
  paths::set_budget(saved);
  CHECK_THROWS_AS(paths::enumerate_lambda(-1), std::invalid_argument);
}
