#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "tpsmix/compensated_sum.hpp"
#include "tpsmix/interpolation_system.hpp"
#include "tpsmix/knot_grid.hpp"
#include "tpsmix/parallel.hpp"

namespace tpsmix {

/// One affine piece K(u) = intercept + slope * u on [left, right].
struct KernelSegment {
  double left = 0.0;
  double right = 0.0;
  double value_left = 0.0;
  double value_right = 0.0;
  double intercept = 0.0;
  double slope = 0.0;

  double length() const { return right - left; }
};

struct KernelNorms {
  double l1 = 0.0;
  double l2 = 0.0;
};

/// Peano kernel of the thin plate spline error functional at x,
///   K(u) = (x - u)_+ - sum_j l_j(x) (hj - u)_+,
/// stored exactly as a continuous piecewise-linear function with breakpoints
/// at the knots and at x. Zero outside [0, 1].
class PiecewiseLinearKernel {
 public:
  PiecewiseLinearKernel(const KnotGrid& grid, const LagrangeWeights& weights)
      : x_(weights.x), weights_(weights.v) {
    if (weights_.size() != grid.size()) {
      throw std::invalid_argument("Lagrange weight count does not match the grid");
    }
    if (!(x_ >= 0.0 && x_ <= 1.0)) {
      throw std::invalid_argument("Peano kernel point must lie in [0, 1]");
    }
    build(grid);
  }

  double x() const { return x_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> breakpoint_values() const { return values_; }
  const std::vector<KernelSegment>& segments() const { return segments_; }

  double operator()(double u) const {
    if (u < 0.0 || u > 1.0) return 0.0;
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), u);
    if (it == breakpoints_.end()) return values_.back();
    const auto right = static_cast<std::size_t>(it - breakpoints_.begin());
    const std::size_t left = right - 1;
    const double t = (u - breakpoints_[left]) / (breakpoints_[right] - breakpoints_[left]);
    return values_[left] + t * (values_[right] - values_[left]);
  }

  /// Exact integral of |K|. A segment whose end values have opposite signs is
  /// split at the root of its affine piece.
  double l1_norm() const {
    CompensatedSum<double> acc;
    for (const auto& s : segments_) {
      const double a = s.value_left;
      const double b = s.value_right;
      if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
        acc += s.length() * (a * a + b * b) / (2.0 * (std::abs(a) + std::abs(b)));
      } else {
        acc += s.length() * (std::abs(a) + std::abs(b)) / 2.0;
      }
    }
    return acc.value();
  }

  /// Exact L2 norm, sqrt of sum over segments of L (a^2 + ab + b^2) / 3.
  double l2_norm() const {
    CompensatedSum<double> acc;
    for (const auto& s : segments_) {
      const double a = s.value_left;
      const double b = s.value_right;
      acc += s.length() * (a * a + a * b + b * b) / 3.0;
    }
    return std::sqrt(std::max(acc.value(), 0.0));
  }

  KernelNorms norms() const { return {l1_norm(), l2_norm()}; }

  /// Exact integral of K(u) p(u) over [0, 1] for a polynomial p given by its
  /// monomial coefficients (degree <= 6).
  double integrate_polynomial(std::span<const double> coeffs) const {
    if (coeffs.size() > 7) throw std::invalid_argument("polynomial degree must be <= 6");
    // 4-point Gauss-Legendre is exact through degree 7.
    static constexpr std::array<double, 4> nodes = {-0.8611363115940526, -0.3399810435848563,
                                                    0.3399810435848563, 0.8611363115940526};
    static constexpr std::array<double, 4> weights = {0.3478548451374538, 0.6521451548625461,
                                                      0.6521451548625461, 0.3478548451374538};
    auto poly = [&](double u) {
      double p = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) p = p * u + *it;
      return p;
    };
    CompensatedSum<double> acc;
    for (const auto& s : segments_) {
      const double half = s.length() / 2.0;
      const double mid = (s.left + s.right) / 2.0;
      double local = 0.0;
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double t = 0.5 * (1.0 + nodes[q]);
        const double k = s.value_left + t * (s.value_right - s.value_left);
        local += weights[q] * k * poly(mid + half * nodes[q]);
      }
      acc += half * local;
    }
    return acc.value();
  }

 private:
  void build(const KnotGrid& grid) {
    const int n = grid.n();
    const double h = grid.h();
    const auto len = static_cast<std::size_t>(n) + 1;

    // tail_mass[i] = sum_{j>i} v_j, tail_ramp[i] = sum_{j>i} v_j (hj - hi),
    // the latter from tail_ramp[i-1] = tail_ramp[i] + h * tail_mass[i-1].
    std::vector<double> tail_mass(len, 0.0);
    std::vector<double> tail_ramp(len, 0.0);
    {
      CompensatedSum<double> mass;
      CompensatedSum<double> ramp;
      for (int i = n - 1; i >= 0; --i) {
        mass += weights_[static_cast<std::size_t>(i) + 1];
        tail_mass[i] = mass.value();
        ramp += h * tail_mass[i];
        tail_ramp[i] = ramp.value();
      }
    }

    const bool at_knot = grid.knot_index(x_) >= 0;
    const int interior = at_knot ? -1 : std::min(n - 1, static_cast<int>(std::floor(x_ * n)));
    breakpoints_.reserve(len + 1);
    values_.reserve(len + 1);
    for (int i = 0; i <= n; ++i) {
      const double knot = grid.knot(i);
      const double lead = x_ > knot ? x_ - knot : 0.0;
      breakpoints_.push_back(knot);
      // At a knot the weights are a unit vector and K vanishes identically.
      values_.push_back(at_knot ? 0.0 : lead - tail_ramp[i]);
      if (i == interior) {
        // x lies strictly inside (hi, h(i+1)); only knots above x contribute.
        breakpoints_.push_back(x_);
        values_.push_back(-(tail_ramp[i] - (x_ - knot) * tail_mass[i]));
      }
    }

    segments_.reserve(breakpoints_.size() - 1);
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
      KernelSegment s;
      s.left = breakpoints_[k];
      s.right = breakpoints_[k + 1];
      s.value_left = values_[k];
      s.value_right = values_[k + 1];
      s.slope = (s.value_right - s.value_left) / s.length();
      s.intercept = s.value_left - s.slope * s.left;
      segments_.push_back(s);
    }
  }

  double x_;
  std::vector<double> weights_;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::vector<KernelSegment> segments_;
};

inline PiecewiseLinearKernel build_kernel(const InterpolationSystem& tps_system, double x) {
  if (tps_system.basis().gamma() != 2.0) {
    throw std::invalid_argument("Peano kernel needs the thin plate spline (gamma = 2) system");
  }
  return PiecewiseLinearKernel{tps_system.grid(), tps_system.lagrange_values(x)};
}

inline double l1_norm(const PiecewiseLinearKernel& kernel) { return kernel.l1_norm(); }
inline double l2_norm(const PiecewiseLinearKernel& kernel) { return kernel.l2_norm(); }

struct KernelProfilePoint {
  double x = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
};

inline std::vector<KernelProfilePoint> kernel_profile(const InterpolationSystem& tps_system,
                                                      std::span<const double> points,
                                                      unsigned threads = 1) {
  std::vector<KernelProfilePoint> out(points.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    const auto kernel = build_kernel(tps_system, points[i]);
    out[i] = {points[i], kernel.l1_norm(), kernel.l2_norm()};
  });
  return out;
}

}  // namespace tpsmix
