#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hml {

/// Rectangular Young diagram of an interlacing pair {x_i}, {y_j}:
/// w(x) = sum_i |x - x_i| - sum_j |x - y_j|, piecewise linear with slopes
/// alternating +-1, equal to |x - z0| outside [x_1, x_N]. Evaluation uses
/// sorted break points and prefix sums, O(log N) per query.
class YoungDiagram {
public:
  YoungDiagram(std::vector<double> xs, std::vector<double> ys, double slack) {
    if (xs.empty())
      throw std::invalid_argument("YoungDiagram: need at least one x");
    if (ys.size() + 1 != xs.size())
      throw std::invalid_argument("YoungDiagram: need |ys| = |xs| - 1");
    if (slack < 0.0)
      throw std::invalid_argument("YoungDiagram: slack must be >= 0");
    xs_ = std::move(xs);
    ys_ = std::move(ys);
    std::sort(xs_.begin(), xs_.end());
    std::sort(ys_.begin(), ys_.end());
    for (std::size_t j = 0; j < ys_.size(); ++j) {
      if (ys_[j] < xs_[j] - slack || xs_[j + 1] < ys_[j] - slack)
        throw std::invalid_argument("YoungDiagram: interlacing violated");
    }
    double sx = 0.0, sy = 0.0;
    px_.resize(xs_.size() + 1, 0.0);
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      sx += xs_[i];
      px_[i + 1] = sx;
    }
    py_.resize(ys_.size() + 1, 0.0);
    for (std::size_t j = 0; j < ys_.size(); ++j) {
      sy += ys_[j];
      py_[j + 1] = sy;
    }
    z0_ = sx - sy;
    verify_continuity();
  }

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  double z0() const { return z0_; }

  double w(double x) const {
    return abs_sum(x, xs_, px_) - abs_sum(x, ys_, py_);
  }

private:
  static double abs_sum(double x, const std::vector<double>& v,
                        const std::vector<double>& prefix) {
    const std::size_t m = v.size();
    const std::size_t p =
        static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), x) -
                                 v.begin());
    return x * (2.0 * static_cast<double>(p) - static_cast<double>(m)) +
           prefix[m] - 2.0 * prefix[p];
  }

  // Walk the break points with the running slope and confirm the assembled
  // piecewise-linear values meet the closed form at every break.
  void verify_continuity() const {
    std::vector<double> breaks;
    breaks.reserve(xs_.size() + ys_.size());
    breaks.insert(breaks.end(), xs_.begin(), xs_.end());
    breaks.insert(breaks.end(), ys_.begin(), ys_.end());
    std::sort(breaks.begin(), breaks.end());
    double scale = 1.0;
    for (double b : breaks) scale = std::max(scale, std::fabs(b));
    const double tol = 1e-9 * scale;
    double val = w(breaks.front());
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double a = breaks[i];
      const double b = breaks[i + 1];
      const double slope = slope_after(a);
      val += slope * (b - a);
      const double direct = w(b);
      if (std::fabs(val - direct) > tol)
        throw std::invalid_argument(
            "YoungDiagram: profile discontinuous at a break point");
      val = direct;
    }
  }

  double slope_after(double t) const {
    const auto cx = static_cast<double>(
        std::upper_bound(xs_.begin(), xs_.end(), t) - xs_.begin());
    const auto cy = static_cast<double>(
        std::upper_bound(ys_.begin(), ys_.end(), t) - ys_.begin());
    const double nx = static_cast<double>(xs_.size());
    const double ny = static_cast<double>(ys_.size());
    return (cx - (nx - cx)) - (cy - (ny - cy));
  }

  std::vector<double> xs_, ys_;
  std::vector<double> px_, py_;
  double z0_ = 0.0;
};

inline YoungDiagram build_diagram(std::vector<double> xs,
                                  std::vector<double> ys, double slack) {
  return YoungDiagram(std::move(xs), std::move(ys), slack);
}

/// Vershik-Kerov-Logan-Shepp curve.
inline double vkls(double x) {
  const double a = std::fabs(x);
  if (a >= 2.0) return a;
  return (2.0 / std::numbers::pi) *
         (x * std::asin(x / 2.0) + std::sqrt(4.0 - x * x));
}

/// k-th moment of the signed measure sum delta_{x_i} - sum delta_{y_j}.
inline double diagram_moment(const YoungDiagram& d, int k) {
  if (k < 0) throw std::invalid_argument("diagram_moment: k must be >= 0");
  auto powk = [k](double v) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= v;
    return r;
  };
  double s = 0.0;
  for (double v : d.xs()) s += powk(v);
  for (double v : d.ys()) s -= powk(v);
  return s;
}

/// Grid sup of |w - Omega| over [-window, window]. Both functions are
/// 1-Lipschitz, so the grid misses the true sup by at most grid_step.
inline double sup_distance(const YoungDiagram& d, double grid_step,
                           double window) {
  if (!(grid_step > 0.0))
    throw std::invalid_argument("sup_distance: grid_step must be positive");
  if (!(window > 0.0))
    throw std::invalid_argument("sup_distance: window must be positive");
  double best = 0.0;
  const long steps = static_cast<long>(std::floor(2.0 * window / grid_step));
  for (long i = 0; i <= steps; ++i) {
    const double x = -window + static_cast<double>(i) * grid_step;
    best = std::max(best, std::fabs(d.w(x) - vkls(x)));
  }
  best = std::max(best, std::fabs(d.w(window) - vkls(window)));
  return best;
}

}
