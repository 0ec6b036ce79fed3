#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "hml/rng.hpp"
#include "hml/tridiagonal.hpp"

namespace hml {

/// Project-wide Gaussian transform: Box-Muller cosine branch. Every call
/// consumes exactly two uniforms, so seeded runs are bit-reproducible draw
/// by draw.
inline double sample_gaussian(double mean, double variance, rng::Stream& s) {
  if (variance < 0.0)
    throw std::invalid_argument("sample_gaussian: negative variance");
  const double u1 = s.next_unit_pos();
  const double u2 = s.next_unit();
  if (variance == 0.0) return mean;
  return mean + std::sqrt(variance) * std::sqrt(-2.0 * std::log(u1)) *
                    std::cos(2.0 * std::numbers::pi * u2);
}

/// Marsaglia-Tsang gamma variate, unit scale. Rejection loop: stream
/// consumption varies per call, the distribution is the contract.
inline double sample_gamma(double shape, rng::Stream& s) {
  if (!(shape > 0.0))
    throw std::invalid_argument("sample_gamma: shape must be positive");
  if (shape < 1.0) {
    const double boost = std::pow(s.next_unit_pos(), 1.0 / shape);
    return sample_gamma(shape + 1.0, s) * boost;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = sample_gaussian(0.0, 1.0, s);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = s.next_unit_pos();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

/// chi_dof: square root of a chi-square, via Gamma(dof/2, scale 2).
/// Fractional dof is fine; beta-Hermite needs it for non-integer beta.
inline double sample_chi(double dof, rng::Stream& s) {
  if (!(dof > 0.0))
    throw std::invalid_argument("sample_chi: dof must be positive");
  return std::sqrt(2.0 * sample_gamma(0.5 * dof, s));
}

struct EnsembleParams {
  std::size_t n = 2;
  double beta = 2.0;
  std::uint64_t seed = 1;
};

/// X_N of the beta-Hermite model: diag ~ (1/sqrt2) N(0,2) = N(0,1),
/// offdiag (i,i+1) ~ (1/sqrt2) chi_{(N-i) beta} with i = 1 at the top left.
/// Draw order is all diagonal entries top to bottom, then all off-diagonal
/// entries top to bottom.
inline TridiagonalMatrix sample_beta_hermite(std::size_t n, double beta,
                                             rng::Stream& s) {
  if (n < 1)
    throw std::invalid_argument("sample_beta_hermite: n must be >= 1");
  if (!(beta > 0.0))
    throw std::invalid_argument("sample_beta_hermite: beta must be positive");
  TridiagonalMatrix x(n);
  for (std::size_t i = 0; i < n; ++i)
    x.diag[i] = sample_gaussian(0.0, 1.0, s);
  for (std::size_t i = 0; i + 1 < n; ++i)
    x.offdiag[i] =
        sample_chi(static_cast<double>(n - 1 - i) * beta, s) / std::sqrt(2.0);
  return x;
}

inline TridiagonalMatrix sample_beta_hermite(const EnsembleParams& p) {
  rng::Stream s(p.seed);
  return sample_beta_hermite(p.n, p.beta, s);
}

/// Y_M = sqrt(2/(M beta)) X_M.
inline TridiagonalMatrix rescale(const TridiagonalMatrix& x, std::size_t m,
                                 double beta) {
  if (x.dim() != m)
    throw std::invalid_argument("rescale: m must equal the matrix dimension");
  if (!(beta > 0.0))
    throw std::invalid_argument("rescale: beta must be positive");
  const double f = std::sqrt(2.0 / (static_cast<double>(m) * beta));
  TridiagonalMatrix y = x;
  for (auto& v : y.diag) v *= f;
  for (auto& v : y.offdiag) v *= f;
  return y;
}

/// One logical realization of X_N with entries addressed by absolute 1-based
/// position. Each entry is a pure function of (root stream, position), so
/// any window, any nested minor, and repeated reads are mutually consistent
/// without storing the matrix. The minor at offset r starts at position r+1.
class BetaHermiteDraw {
public:
  BetaHermiteDraw(std::size_t n, double beta, rng::Stream root)
      : n_(n), beta_(beta), root_(root) {
    if (n < 1)
      throw std::invalid_argument("BetaHermiteDraw: n must be >= 1");
    if (!(beta > 0.0))
      throw std::invalid_argument("BetaHermiteDraw: beta must be positive");
  }

  double diag(std::size_t pos) const {
    if (pos < 1 || pos > n_)
      throw std::invalid_argument("BetaHermiteDraw: diag position out of range");
    rng::Stream s = root_.substream(2 * pos);
    return sample_gaussian(0.0, 1.0, s);
  }

  double offdiag(std::size_t pos) const {
    if (pos < 1 || pos + 1 > n_)
      throw std::invalid_argument(
          "BetaHermiteDraw: offdiag position out of range");
    rng::Stream s = root_.substream(2 * pos + 1);
    return sample_chi(static_cast<double>(n_ - pos) * beta_, s) /
           std::sqrt(2.0);
  }

  std::size_t dim() const { return n_; }
  double beta() const { return beta_; }

private:
  std::size_t n_;
  double beta_;
  rng::Stream root_;
};

}
