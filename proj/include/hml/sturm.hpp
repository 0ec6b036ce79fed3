#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hml/tridiagonal.hpp"

namespace hml {

/// Eigenvalues in ascending order, with the bisection tolerance they carry.
struct Spectrum {
  std::vector<double> values;
  double tol = 0.0;
};

/// Gershgorin enclosure of the spectrum.
inline std::pair<double, double> gershgorin_interval(
    const TridiagonalMatrix& t) {
  const std::size_t n = t.dim();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) r += std::abs(t.offdiag[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  return {lo, hi};
}

inline double default_eigen_tol(const TridiagonalMatrix& t) {
  auto [lo, hi] = gershgorin_interval(t);
  double radius = std::max(std::abs(lo), std::abs(hi));
  return 1e-12 * std::max(1.0, radius);
}

namespace detail {

inline double sturm_pivmin(const TridiagonalMatrix& t) {
  double e2max = 1.0;
  for (double e : t.offdiag) e2max = std::max(e2max, e * e);
  return std::numeric_limits<double>::min() * e2max;
}

}

/// Number of eigenvalues strictly below x, by the LDL^T sign count.
inline std::size_t sturm_count(const TridiagonalMatrix& t, double x) {
  const std::size_t n = t.dim();
  const double pivmin = detail::sturm_pivmin(t);
  std::size_t cnt = 0;
  double q = t.diag[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++cnt;
  for (std::size_t i = 1; i < n; ++i) {
    q = t.diag[i] - x - t.offdiag[i - 1] * t.offdiag[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++cnt;
  }
  return cnt;
}

/// All eigenvalues by Sturm bisection on the Gershgorin interval. Intervals
/// are split recursively so one count serves every eigenvalue it separates;
/// each value is located to within tol.
inline Spectrum eigenvalues(const TridiagonalMatrix& t, double tol) {
  const std::size_t n = t.dim();
  if (!(tol > 0.0))
    throw std::invalid_argument("eigenvalues: tol must be positive");
  auto [gl, gu] = gershgorin_interval(t);
  // open the enclosure a hair so counts at the ends are 0 and n
  double pad = tol + 1e-15 * std::max(std::abs(gl), std::abs(gu));
  gl -= pad;
  gu += pad;

  Spectrum s;
  s.tol = tol;
  s.values.assign(n, 0.0);

  struct Task {
    std::size_t i0, i1;  // eigenvalue index range [i0, i1)
    double lo, hi;
  };
  std::vector<Task> stack{{0, n, gl, gu}};
  while (!stack.empty()) {
    Task task = stack.back();
    stack.pop_back();
    if (task.hi - task.lo <= 2.0 * tol) {
      double mid = 0.5 * (task.lo + task.hi);
      for (std::size_t i = task.i0; i < task.i1; ++i) s.values[i] = mid;
      continue;
    }
    double mid = 0.5 * (task.lo + task.hi);
    std::size_t c = sturm_count(t, mid);
    c = std::clamp(c, task.i0, task.i1);
    if (c > task.i0) stack.push_back({task.i0, c, task.lo, mid});
    if (c < task.i1) stack.push_back({c, task.i1, mid, task.hi});
  }
  return s;
}

inline Spectrum eigenvalues(const TridiagonalMatrix& t) {
  return eigenvalues(t, default_eigen_tol(t));
}

/// Cauchy interlacing x_1 <= y_1 <= x_2 <= ... within slack. inner must have
/// exactly one fewer value than outer.
inline bool check_interlacing(const Spectrum& outer, const Spectrum& inner,
                              double slack) {
  if (inner.values.size() + 1 != outer.values.size())
    throw std::invalid_argument(
        "check_interlacing: inner spectrum must have dim-1 values");
  for (std::size_t i = 0; i < inner.values.size(); ++i) {
    if (outer.values[i] > inner.values[i] + slack) return false;
    if (inner.values[i] > outer.values[i + 1] + slack) return false;
  }
  return true;
}

}
