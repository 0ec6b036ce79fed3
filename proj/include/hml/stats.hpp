#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hml::stats {

/// Streaming mean / centered-comoment accumulator for fixed-width vectors
/// (Welford update, Chan merge). Merging two accumulators reproduces the
/// concatenated stream up to floating-point reassociation.
class MomentAccumulator {
public:
  explicit MomentAccumulator(std::size_t dim)
      : d_(dim), mean_(dim, 0.0), m2_(dim * dim, 0.0) {
    if (dim == 0)
      throw std::invalid_argument("MomentAccumulator: dim must be >= 1");
  }

  std::size_t dim() const { return d_; }
  std::size_t count() const { return n_; }

  void add(const double* x) {
    ++n_;
    const double inv = 1.0 / static_cast<double>(n_);
    dold_.resize(d_);
    dnew_.resize(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      dold_[i] = x[i] - mean_[i];
      mean_[i] += dold_[i] * inv;
      dnew_[i] = x[i] - mean_[i];
    }
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = i; j < d_; ++j) {
        const double u = dold_[i] * dnew_[j];
        m2_[i * d_ + j] += u;
        if (j != i) m2_[j * d_ + i] += u;
      }
  }

  void add(const std::vector<double>& x) {
    if (x.size() != d_)
      throw std::invalid_argument("MomentAccumulator: wrong sample width");
    add(x.data());
  }

  void merge(const MomentAccumulator& o) {
    if (o.d_ != d_)
      throw std::invalid_argument("MomentAccumulator: dim mismatch in merge");
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(o.n_);
    const double nt = na + nb;
    std::vector<double> delta(d_);
    for (std::size_t i = 0; i < d_; ++i) delta[i] = o.mean_[i] - mean_[i];
    const double w = na * nb / nt;
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j)
        m2_[i * d_ + j] += o.m2_[i * d_ + j] + w * delta[i] * delta[j];
    for (std::size_t i = 0; i < d_; ++i) mean_[i] += delta[i] * nb / nt;
    n_ += o.n_;
  }

  double mean(std::size_t i) const { return mean_.at(i); }

  /// Unbiased covariance estimate, m2/(n-1).
  double covariance(std::size_t i, std::size_t j) const {
    if (n_ < 2)
      throw std::logic_error("MomentAccumulator: covariance needs n >= 2");
    return m2_.at(i * d_ + j) / static_cast<double>(n_ - 1);
  }

  /// Second moment about the origin, (1/n) sum x_i x_j. The natural estimate
  /// when the samples are already exactly centered.
  double second_moment(std::size_t i, std::size_t j) const {
    if (n_ < 1)
      throw std::logic_error("MomentAccumulator: second_moment needs n >= 1");
    return m2_.at(i * d_ + j) / static_cast<double>(n_) + mean_[i] * mean_[j];
  }

  double se_mean(std::size_t i) const {
    return std::sqrt(covariance(i, i) / static_cast<double>(n_));
  }

  /// Standard error of the (i,j) covariance estimate under approximate
  /// joint Gaussianity: sqrt((C_ii C_jj + C_ij^2)/n).
  double se_covariance(std::size_t i, std::size_t j) const {
    const double cii = covariance(i, i);
    const double cjj = covariance(j, j);
    const double cij = covariance(i, j);
    return std::sqrt((cii * cjj + cij * cij) / static_cast<double>(n_));
  }

  double se_second_moment(std::size_t i, std::size_t j) const {
    const double sii = second_moment(i, i);
    const double sjj = second_moment(j, j);
    const double sij = second_moment(i, j);
    return std::sqrt((sii * sjj + sij * sij) / static_cast<double>(n_));
  }

private:
  std::size_t d_;
  std::size_t n_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
  std::vector<double> dold_, dnew_;  // scratch, not part of the state
};

/// Streaming scalar moments through order four (Pebay update and merge).
class ScalarMoments {
public:
  void add(double x) {
    const double n1 = static_cast<double>(n_);
    ++n_;
    const double n = static_cast<double>(n_);
    const double delta = x - mean_;
    const double dn = delta / n;
    const double dn2 = dn * dn;
    const double term1 = delta * dn * n1;
    mean_ += dn;
    m4_ += term1 * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * m2_ -
           4.0 * dn * m3_;
    m3_ += term1 * dn * (n - 2.0) - 3.0 * dn * m2_;
    m2_ += term1;
  }

  void merge(const ScalarMoments& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(o.n_);
    const double n = na + nb;
    const double d = o.mean_ - mean_;
    const double d2 = d * d;
    const double m2 = m2_ + o.m2_ + d2 * na * nb / n;
    const double m3 = m3_ + o.m3_ + d * d2 * na * nb * (na - nb) / (n * n) +
                      3.0 * d * (na * o.m2_ - nb * m2_) / n;
    const double m4 =
        m4_ + o.m4_ +
        d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
        6.0 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) +
        4.0 * d * (na * o.m3_ - nb * m3_) / n;
    mean_ += d * nb / n;
    m2_ = m2;
    m3_ = m3;
    m4_ = m4;
    n_ += o.n_;
  }

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }

  double variance() const {
    if (n_ < 2) throw std::logic_error("ScalarMoments: variance needs n >= 2");
    return m2_ / static_cast<double>(n_ - 1);
  }

  double skewness() const {
    if (n_ < 2 || m2_ <= 0.0)
      throw std::logic_error("ScalarMoments: skewness needs spread data");
    const double n = static_cast<double>(n_);
    return std::sqrt(n) * m3_ / std::pow(m2_, 1.5);
  }

  /// Plain (non-excess) kurtosis; 3 for a Gaussian.
  double kurtosis() const {
    if (n_ < 2 || m2_ <= 0.0)
      throw std::logic_error("ScalarMoments: kurtosis needs spread data");
    const double n = static_cast<double>(n_);
    return n * m4_ / (m2_ * m2_);
  }

  double se_mean() const {
    return std::sqrt(variance() / static_cast<double>(n_));
  }
  double se_variance() const {
    return variance() * std::sqrt(2.0 / static_cast<double>(n_ - 1));
  }
  double se_skewness() const {
    return std::sqrt(6.0 / static_cast<double>(n_));
  }
  double se_kurtosis() const {
    return std::sqrt(24.0 / static_cast<double>(n_));
  }

private:
  std::size_t n_ = 0;
  double mean_ = 0.0, m2_ = 0.0, m3_ = 0.0, m4_ = 0.0;
};

/// Two-sample Kolmogorov-Smirnov distance. Ties are handled by advancing
/// both sides past the shared value before reading the gap.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  return d;
}

/// Asymptotic two-sample KS critical value at significance alpha.
inline double ks_critical(double alpha, std::size_t na, std::size_t nb) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("ks_critical: alpha must be in (0,1)");
  if (na == 0 || nb == 0)
    throw std::invalid_argument("ks_critical: empty sample");
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double fa = static_cast<double>(na);
  const double fb = static_cast<double>(nb);
  return c * std::sqrt((fa + fb) / (fa * fb));
}

/// Linear-interpolation quantile (copies and sorts its input).
inline double quantile(std::vector<double> xs, double p) {
  if (xs.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("quantile: p must be in [0,1]");
  std::sort(xs.begin(), xs.end());
  const double h = p * static_cast<double>(xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= xs.size()) return xs.back();
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[lo + 1] - xs[lo]);
}

inline double median(const std::vector<double>& xs) {
  return quantile(xs, 0.5);
}

}
