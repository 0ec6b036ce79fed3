#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hml/rng.hpp"
#include "hml/sampler.hpp"
#include "hml/stats.hpp"
#include "hml/tridiagonal.hpp"

namespace hml {

using complexd = std::complex<double>;

/// Dense symmetric (real) or Hermitian (complex) matrix with the symmetry
/// maintained by construction: set() writes both mirror entries.
class DenseSymmetric {
public:
  DenseSymmetric(std::size_t n, bool hermitian)
      : n_(n), hermitian_(hermitian), a_(n * n, complexd(0.0, 0.0)) {
    if (n == 0)
      throw std::invalid_argument("DenseSymmetric: dim must be >= 1");
  }

  std::size_t dim() const { return n_; }
  bool hermitian() const { return hermitian_; }

  complexd at(std::size_t i, std::size_t j) const {
    check(i, j);
    return a_[i * n_ + j];
  }

  void set(std::size_t i, std::size_t j, complexd v) {
    check(i, j);
    if (!hermitian_ && v.imag() != 0.0)
      throw std::invalid_argument("DenseSymmetric: real matrix, complex value");
    if (i == j && v.imag() != 0.0)
      throw std::invalid_argument("DenseSymmetric: diagonal must be real");
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = (v.imag() == 0.0) ? v : std::conj(v);
  }

  double max_abs() const {
    double m = 0.0;
    for (const complexd& z : a_) m = std::max(m, std::abs(z));
    return m;
  }

private:
  void check(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_)
      throw std::out_of_range("DenseSymmetric: index out of range");
  }

  std::size_t n_;
  bool hermitian_;
  std::vector<complexd> a_;
};

/// GOE: diagonal N(0,1), off-diagonal N(0,1/2). Draw order: diagonal first,
/// then the upper triangle row by row.
inline DenseSymmetric sample_goe(std::size_t n, rng::Stream& s) {
  DenseSymmetric a(n, false);
  for (std::size_t i = 0; i < n; ++i)
    a.set(i, i, complexd(sample_gaussian(0.0, 1.0, s), 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      a.set(i, j, complexd(sample_gaussian(0.0, 0.5, s), 0.0));
  return a;
}

/// GUE: real diagonal N(0,1), off-diagonal real and imaginary parts each
/// N(0,1/2). Same draw order as sample_goe, real part before imaginary.
inline DenseSymmetric sample_gue(std::size_t n, rng::Stream& s) {
  DenseSymmetric a(n, true);
  for (std::size_t i = 0; i < n; ++i)
    a.set(i, i, complexd(sample_gaussian(0.0, 1.0, s), 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double re = sample_gaussian(0.0, 0.5, s);
      const double im = sample_gaussian(0.0, 0.5, s);
      a.set(i, j, complexd(re, im));
    }
  return a;
}

struct ReductionStep {
  int step;
  double d_value;  // trace minus trace of the lower-right minor, two sums
  double trace;
  double entry11;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
};

namespace householder_detail {

struct Reflector {
  std::vector<complexd> v;
  double tau;
  complexd alpha;  // image of the pivot column head
};

/// Householder vector for x with the cancellation-safe sign: alpha has the
/// opposite phase of x[0], so v = x - alpha e1 never loses digits.
inline Reflector make_reflector(const std::vector<complexd>& x) {
  if (x.size() < 2)
    throw std::invalid_argument("make_reflector: need length >= 2");
  double norm2 = 0.0;
  for (const complexd& z : x) norm2 += std::norm(z);
  const double norm = std::sqrt(norm2);
  const complexd sign =
      (x[0] == complexd(0.0, 0.0)) ? complexd(1.0, 0.0) : x[0] / std::abs(x[0]);
  const complexd alpha = -sign * norm;
  Reflector r;
  r.v = x;
  r.v[0] -= alpha;
  double vnorm2 = 0.0;
  for (const complexd& z : r.v) vnorm2 += std::norm(z);
  r.tau = 2.0 / vnorm2;
  r.alpha = alpha;
  return r;
}

inline ReductionStep measure(const std::vector<complexd>& m, std::size_t n,
                             int step) {
  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += m[i * n + i].real();
  double minor_trace = 0.0;
  for (std::size_t i = 1; i < n; ++i) minor_trace += m[i * n + i].real();
  return {step, trace - minor_trace, trace, m[0].real()};
}

}

/// Reduce to real symmetric tridiagonal form by Householder conjugations of
/// the block shape diag(I, P), which leaves the (1,1) entry, the trace, and
/// the trace difference D alone at every step. A trailing diagonal sign
/// (or unit-phase) conjugation makes the off-diagonals nonnegative; it is
/// block diagonal with leading 1, so the preserved quantities survive it.
inline std::pair<TridiagonalMatrix, ReductionTrace> tridiagonalize(
    const DenseSymmetric& a) {
  const std::size_t n = a.dim();
  std::vector<complexd> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a.at(i, j);

  ReductionTrace rec;
  rec.steps.push_back(householder_detail::measure(m, n, 0));

  for (std::size_t c = 0; c + 2 < n; ++c) {
    const std::size_t len = n - 1 - c;
    double tail2 = 0.0;
    for (std::size_t r = c + 2; r < n; ++r) tail2 += std::norm(m[r * n + c]);
    if (tail2 == 0.0) {
      // column already tridiagonal (or fully zero): identity step
      rec.steps.push_back(householder_detail::measure(
          m, n, static_cast<int>(c) + 1));
      continue;
    }
    std::vector<complexd> x(len);
    for (std::size_t r = 0; r < len; ++r) x[r] = m[(c + 1 + r) * n + c];
    const auto refl = householder_detail::make_reflector(x);
    const std::vector<complexd>& v = refl.v;
    const double tau = refl.tau;

    // conjugate the trailing block: B -= q v^H + v q^H with
    // p = tau B v, q = p - (tau/2)(v^H p) v
    std::vector<complexd> p(len, complexd(0.0, 0.0));
    for (std::size_t i = 0; i < len; ++i) {
      complexd acc(0.0, 0.0);
      const complexd* row = &m[(c + 1 + i) * n + (c + 1)];
      for (std::size_t j = 0; j < len; ++j) acc += row[j] * v[j];
      p[i] = tau * acc;
    }
    complexd vhp(0.0, 0.0);
    for (std::size_t i = 0; i < len; ++i) vhp += std::conj(v[i]) * p[i];
    const complexd K = 0.5 * tau * vhp;
    std::vector<complexd> q(len);
    for (std::size_t i = 0; i < len; ++i) q[i] = p[i] - K * v[i];
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t j = 0; j < len; ++j)
        m[(c + 1 + i) * n + (c + 1 + j)] -=
            q[i] * std::conj(v[j]) + v[i] * std::conj(q[j]);
    for (std::size_t i = 0; i < len; ++i) {
      complexd& dii = m[(c + 1 + i) * n + (c + 1 + i)];
      dii = complexd(dii.real(), 0.0);
    }

    m[(c + 1) * n + c] = refl.alpha;
    m[c * n + (c + 1)] = std::conj(refl.alpha);
    for (std::size_t r = c + 2; r < n; ++r) {
      m[r * n + c] = complexd(0.0, 0.0);
      m[c * n + r] = complexd(0.0, 0.0);
    }
    rec.steps.push_back(householder_detail::measure(
        m, n, static_cast<int>(c) + 1));
  }

  std::vector<double> diag(n), off(n >= 1 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) diag[i] = m[i * n + i].real();
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = std::abs(m[(i + 1) * n + i]);
  // final sign/phase pass touches only off-diagonal phases; remeasure from
  // the corrected matrix
  if (n >= 2) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      m[(i + 1) * n + i] = complexd(off[i], 0.0);
      m[i * n + (i + 1)] = complexd(off[i], 0.0);
    }
    rec.steps.push_back(householder_detail::measure(
        m, n, static_cast<int>(rec.steps.size())));
  }
  return {TridiagonalMatrix(std::move(diag), std::move(off)), std::move(rec)};
}

namespace householder_detail {

inline bool steps_within(const ReductionTrace& tr, double tol_abs) {
  if (tr.steps.empty()) return false;
  const ReductionStep& base = tr.steps.front();
  for (const ReductionStep& s : tr.steps) {
    if (std::fabs(s.d_value - base.d_value) > tol_abs) return false;
    if (std::fabs(s.trace - base.trace) > tol_abs) return false;
    if (std::fabs(s.entry11 - base.entry11) > tol_abs) return false;
  }
  return true;
}

}

/// Largest absolute drift of D, trace, or (1,1) across the reduction steps.
/// check_preservation is this compared against tol * dim * max|entry|.
inline double preservation_gap(const DenseSymmetric& a) {
  if (a.dim() < 2)
    throw std::invalid_argument("preservation_gap: need dim >= 2");
  auto [t, tr] = tridiagonalize(a);
  (void)t;
  const ReductionStep& base = tr.steps.front();
  double gap = 0.0;
  for (const ReductionStep& s : tr.steps) {
    gap = std::max(gap, std::fabs(s.d_value - base.d_value));
    gap = std::max(gap, std::fabs(s.trace - base.trace));
    gap = std::max(gap, std::fabs(s.entry11 - base.entry11));
  }
  return gap;
}

/// True when D, the trace, and the (1,1) entry stay put along the whole
/// reduction, to tol * dim * max|entry|.
inline bool check_preservation(const DenseSymmetric& a, double tol) {
  if (a.dim() < 2)
    throw std::invalid_argument("check_preservation: need dim >= 2");
  if (!(tol > 0.0))
    throw std::invalid_argument("check_preservation: tol must be positive");
  const double scale = static_cast<double>(a.dim()) * a.max_abs();
  auto [t, tr] = tridiagonalize(a);
  (void)t;
  return householder_detail::steps_within(tr, tol * std::max(1.0, scale));
}

struct EntryMatch {
  std::string name;
  double ks;
  double threshold;
  bool pass;
};

struct DistributionMatchReport {
  std::size_t n;
  double beta;
  std::size_t reps;
  double alpha;
  std::vector<EntryMatch> entries;
  bool all_pass;
};

namespace householder_detail {

/// Entry samples from the dense route: tridiagonalize GOE (beta 1) or GUE
/// (beta 2) draws. Slot layout: diag 0..n-1, then offdiag 0..n-2.
inline std::vector<std::vector<double>> collect_dense_entries(
    std::size_t n, int beta, std::size_t reps, rng::Stream& s) {
  std::vector<std::vector<double>> out(2 * n - 1);
  for (auto& v : out) v.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    DenseSymmetric a = (beta == 1) ? sample_goe(n, s) : sample_gue(n, s);
    auto [t, tr] = tridiagonalize(a);
    (void)tr;
    for (std::size_t i = 0; i < n; ++i) out[i].push_back(t.diag[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) out[n + i].push_back(t.offdiag[i]);
  }
  return out;
}

/// Entry samples from the tridiagonal model itself, same slot layout.
inline std::vector<std::vector<double>> collect_model_entries(
    std::size_t n, double beta, std::size_t reps, rng::Stream& s) {
  std::vector<std::vector<double>> out(2 * n - 1);
  for (auto& v : out) v.reserve(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    TridiagonalMatrix x = sample_beta_hermite(n, beta, s);
    for (std::size_t i = 0; i < n; ++i) out[i].push_back(x.diag[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) out[n + i].push_back(x.offdiag[i]);
  }
  return out;
}

}

/// Two-sample KS comparison of every tridiagonal entry between the reduced
/// dense ensemble and the direct tridiagonal model.
inline DistributionMatchReport distribution_match(std::size_t n, int beta,
                                                  std::size_t reps,
                                                  rng::Stream& s,
                                                  double alpha = 1e-3) {
  if (n < 2)
    throw std::invalid_argument("distribution_match: need n >= 2");
  if (beta != 1 && beta != 2)
    throw std::invalid_argument("distribution_match: beta must be 1 or 2");
  if (reps < 2)
    throw std::invalid_argument("distribution_match: need reps >= 2");
  rng::Stream sd = s.substream(1);
  rng::Stream sm = s.substream(2);
  const auto dense = householder_detail::collect_dense_entries(n, beta, reps, sd);
  const auto model =
      householder_detail::collect_model_entries(n, static_cast<double>(beta),
                                                reps, sm);
  DistributionMatchReport rep;
  rep.n = n;
  rep.beta = static_cast<double>(beta);
  rep.reps = reps;
  rep.alpha = alpha;
  rep.all_pass = true;
  const double thr = stats::ks_critical(alpha, reps, reps);
  for (std::size_t e = 0; e < dense.size(); ++e) {
    EntryMatch em;
    em.name = (e < n) ? "diag[" + std::to_string(e + 1) + "]"
                      : "offdiag[" + std::to_string(e - n + 1) + "]";
    em.ks = stats::ks_distance(dense[e], model[e]);
    em.threshold = thr;
    em.pass = em.ks <= thr;
    rep.all_pass = rep.all_pass && em.pass;
    rep.entries.push_back(std::move(em));
  }
  return rep;
}

}
