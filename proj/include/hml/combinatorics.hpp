#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace hml {

using uint128 = unsigned __int128;

/// Exact binomial coefficient. Intermediate products stay exact in 128 bits
/// for n up to ~120, far beyond the k1+k2 <= 60 range the covariance
/// formulas promise exactly.
inline uint128 binomial_u128(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  uint128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<uint128>(n - k + i) / static_cast<uint128>(i);
  }
  return r;
}

inline double u128_to_double(uint128 v) { return static_cast<double>(v); }

/// Binomial as double: exact integer route for small n, log-gamma beyond
/// (relative error well under 1e-12 there).
inline double binomial_real(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  if (n <= 100) return u128_to_double(binomial_u128(n, k));
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(n - k + 1.0));
}

/// Catalan numbers by the integer recurrence C_{m} = C_{m-1}*(4m-2)/(m+1).
/// Exact through m = 36; the last few need the 128-bit product.
inline std::uint64_t catalan(int m) {
  if (m < 0 || m > 36)
    throw std::invalid_argument("catalan: index outside exact range [0,36]");
  uint128 c = 1;
  for (int i = 1; i <= m; ++i) c = c * (4 * i - 2) / (i + 1);
  return static_cast<std::uint64_t>(c);
}

/// (2m-1)!! = 1*3*...*(2m-1); the 2m-th central moment of a unit Gaussian.
inline double double_factorial_odd(int m) {
  double r = 1.0;
  for (int i = 1; i <= m; ++i) r *= 2.0 * i - 1.0;
  return r;
}

}
