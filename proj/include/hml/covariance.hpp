#pragma once

#include <stdexcept>
#include <vector>

#include "hml/combinatorics.hpp"

namespace hml {

/// Integer part of the limit covariance of (sqrt(N) D_{N,k1}, sqrt(N) D_{N,k2}):
/// the covariance equals this divided by beta. Zero when the parities differ
/// or either index is zero (D_{N,0} is the constant 1).
inline uint128 clt_covariance_numer(int k1, int k2) {
  if (k1 < 0 || k2 < 0)
    throw std::invalid_argument("clt_covariance: k must be >= 0");
  if ((k1 + k2) % 2 != 0) return 0;
  if (k1 == 0 || k2 == 0) return 0;
  const int L = k1 + k2 - 2;
  uint128 num = static_cast<uint128>(4) * k1 * k2 * binomial_u128(L, L / 2);
  if (num % static_cast<uint128>(k1 + k2) != 0)
    throw std::logic_error("clt_covariance: non-integral closed form");
  return num / static_cast<uint128>(k1 + k2);
}

inline double clt_covariance(int k1, int k2, double beta) {
  if (!(beta > 0.0))
    throw std::invalid_argument("clt_covariance: beta must be positive");
  return u128_to_double(clt_covariance_numer(k1, k2)) / beta;
}

/// Integer part of the minor-offset covariance: covariance = numer / beta.
/// Closed form 2 k l [binom(k+l-2, (k+l)/2-c-1) - binom(k+l-2, (k+l)/2-c-2)];
/// out-of-range binomials are zero, so large offsets decay to exact 0.
inline uint128 offset_covariance_numer(int k, int l, long long c) {
  if (k < 0 || l < 0)
    throw std::invalid_argument("offset_covariance: k, l must be >= 0");
  if (c < 0)
    throw std::invalid_argument("offset_covariance: offset must be >= 0");
  if ((k + l) % 2 != 0) return 0;
  if (k == 0 || l == 0) return 0;
  const int L = k + l - 2;
  const int a = (k + l) / 2 - static_cast<int>(c) - 1;
  uint128 first = binomial_u128(L, a);
  uint128 second = binomial_u128(L, a - 1);
  return static_cast<uint128>(2) * k * l * (first - second);
}

inline double offset_covariance(int k, int l, long long c, double beta) {
  if (!(beta > 0.0))
    throw std::invalid_argument("offset_covariance: beta must be positive");
  return u128_to_double(offset_covariance_numer(k, l, c)) / beta;
}

/// k-th moment of the arcsine density on [-2,2]: binom(k, k/2) for even k,
/// 0 for odd. The k = 0 value is the density mass 1, not the (vanishing)
/// total mass of the signed measure (|x|)''/2 - delta_0 it derives from.
inline double arcsine_moment(int k) {
  if (k < 0) throw std::invalid_argument("arcsine_moment: k must be >= 0");
  if (k == 0) return 1.0;
  if (k % 2 == 1) return 0.0;
  return binomial_real(k, k / 2);
}

/// Even moments of the semicircle law on [-2,2] are the Catalan numbers.
inline double semicircle_moment(int m) {
  if (m < 0) throw std::invalid_argument("semicircle_moment: m must be >= 0");
  if (m % 2 == 1) return 0.0;
  return binomial_real(m, m / 2) / (m / 2 + 1.0);
}

/// Polynomials as coefficient vectors, ascending degree.
using Poly = std::vector<double>;

inline Poly poly_derivative(const Poly& f) {
  Poly d;
  for (std::size_t i = 1; i < f.size(); ++i)
    d.push_back(static_cast<double>(i) * f[i]);
  return d;
}

inline Poly poly_multiply(const Poly& f, const Poly& g) {
  if (f.empty() || g.empty()) return {};
  Poly p(f.size() + g.size() - 1, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) p[i + j] += f[i] * g[j];
  return p;
}

/// Limit covariance of linear statistics: (2/beta) * integral of f' g'
/// against the semicircle density.
inline double semicircle_covariance(const Poly& f, const Poly& g, double beta) {
  if (!(beta > 0.0))
    throw std::invalid_argument("semicircle_covariance: beta must be positive");
  Poly prod = poly_multiply(poly_derivative(f), poly_derivative(g));
  double integral = 0.0;
  for (std::size_t m = 0; m < prod.size(); ++m)
    integral += prod[m] * semicircle_moment(static_cast<int>(m));
  return 2.0 / beta * integral;
}

/// The same covariance for the monomial pair (x^k, x^l), kept in exact
/// integers: covariance = 2 k l Catalan((k+l-2)/2) / beta. Independent route
/// from clt_covariance_numer (Catalan recurrence vs binomial/division), so
/// comparing the two checks the algebra, not one implementation against
/// itself.
inline uint128 semicircle_covariance_numer(int k, int l) {
  if (k < 1 || l < 1)
    throw std::invalid_argument("semicircle_covariance_numer: k, l must be >= 1");
  if ((k + l) % 2 != 0) return 0;
  const int m = (k + l - 2) / 2;
  return static_cast<uint128>(2) * k * l * catalan(m);
}

}
