#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "hml/rng.hpp"
#include "hml/sampler.hpp"
#include "hml/sturm.hpp"
#include "hml/tridiagonal.hpp"

using hml::minor_of;
using hml::Spectrum;
using hml::TridiagonalMatrix;

namespace {

Eigen::MatrixXd dense_of(const TridiagonalMatrix& t) {
  const int n = static_cast<int>(t.dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = t.diag[i];
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = t.offdiag[i];
    m(i + 1, i) = t.offdiag[i];
  }
  return m;
}

std::vector<double> eigen_oracle(const TridiagonalMatrix& t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_of(t),
                                                    Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(),
                        es.eigenvalues().data() + t.dim());
  std::sort(v.begin(), v.end());
  return v;
}

}

TEST_CASE("tridiagonal shape validation") {
  TridiagonalMatrix a(1);
  CHECK(a.dim() == 1);
  CHECK(a.offdiag.empty());
  CHECK_THROWS_AS(TridiagonalMatrix({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(TridiagonalMatrix({1.0, 2.0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(TridiagonalMatrix({1.0}, {2.0}), std::invalid_argument);
}

TEST_CASE("minor drops the first row and column") {
  const TridiagonalMatrix t({1, 2, 3, 4}, {5, 6, 7});
  const TridiagonalMatrix m = minor_of(t);
  CHECK(m.diag == std::vector<double>{2, 3, 4});
  CHECK(m.offdiag == std::vector<double>{6, 7});
  CHECK_THROWS_AS(minor_of(TridiagonalMatrix(1)), std::invalid_argument);
}

TEST_CASE("gershgorin interval encloses hand values") {
  const TridiagonalMatrix t({1, -2, 0.5}, {2, -1});
  auto [lo, hi] = hml::gershgorin_interval(t);
  // rows: 1 +/- 2, -2 +/- 3, 0.5 +/- 1
  CHECK(lo == Catch::Approx(-5.0));
  CHECK(hi == Catch::Approx(3.0));
}

TEST_CASE("sturm count is a staircase of the spectrum") {
  // 2x2 closed form: d = {a, c}, off = {b}
  // eigenvalues (a+c)/2 +/- sqrt(((a-c)/2)^2 + b^2)
  const double a = 1.0, c = -2.0, b = 1.5;
  const TridiagonalMatrix t({a, c}, {b});
  const double mid = 0.5 * (a + c);
  const double rad = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  const double l0 = mid - rad, l1 = mid + rad;
  CHECK(hml::sturm_count(t, l0 - 0.1) == 0);
  CHECK(hml::sturm_count(t, 0.5 * (l0 + l1)) == 1);
  CHECK(hml::sturm_count(t, l1 + 0.1) == 2);
}

TEST_CASE("bisection eigenvalues match the 2x2 closed form") {
  const TridiagonalMatrix t({3.0, -1.0}, {2.0});
  const Spectrum s = hml::eigenvalues(t, 1e-13);
  const double mid = 1.0, rad = std::sqrt(4.0 + 4.0);
  REQUIRE(s.values.size() == 2);
  CHECK(s.values[0] == Catch::Approx(mid - rad).margin(1e-12));
  CHECK(s.values[1] == Catch::Approx(mid + rad).margin(1e-12));
}

TEST_CASE("bisection matches a dense solver on random draws") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    hml::rng::Stream s(seed);
    const TridiagonalMatrix t = hml::sample_beta_hermite(25, 2.0, s);
    const Spectrum got = hml::eigenvalues(t);
    const std::vector<double> want = eigen_oracle(t);
    REQUIRE(got.values.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
      CHECK(got.values[i] == Catch::Approx(want[i]).margin(50 * got.tol));
  }
}

TEST_CASE("repeated eigenvalues are resolved with multiplicity") {
  // diag identity block: eigenvalue 2 with multiplicity 3
  const TridiagonalMatrix t({2, 2, 2}, {0, 0});
  const Spectrum s = hml::eigenvalues(t, 1e-13);
  for (double v : s.values) CHECK(v == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("interlacing holds for the sampled model and its minor") {
  for (std::uint64_t seed : {11u, 12u}) {
    hml::rng::Stream st(seed);
    const TridiagonalMatrix t = hml::sample_beta_hermite(30, 1.0, st);
    const Spectrum outer = hml::eigenvalues(t);
    const Spectrum inner = hml::eigenvalues(minor_of(t));
    CHECK(hml::check_interlacing(outer, inner,
                                 10.0 * std::max(outer.tol, inner.tol)));
  }
  // and a hand case where it fails: inner above the outer top
  Spectrum o, i;
  o.values = {0.0, 1.0};
  i.values = {5.0};
  CHECK_FALSE(hml::check_interlacing(o, i, 1e-9));
  Spectrum bad;
  bad.values = {0.0, 1.0};  // same size as outer: shape mismatch
  CHECK_THROWS_AS(hml::check_interlacing(o, bad, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(hml::eigenvalues(TridiagonalMatrix({1.0}, {}), 0.0),
                  std::invalid_argument);
}
