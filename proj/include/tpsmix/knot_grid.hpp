#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tpsmix {

/// Equispaced knots {0, h, ..., 1} with h = 1/n.
class KnotGrid {
 public:
  explicit KnotGrid(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("knot grid needs n >= 1, got " + std::to_string(n));
    h_ = 1.0 / n;
  }

  int n() const { return n_; }
  double h() const { return h_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) + 1; }

  /// Knot i, computed as i/n so that knot(n) == 1 exactly.
  double knot(int i) const { return static_cast<double>(i) / n_; }

  std::vector<double> knots() const {
    std::vector<double> out(size());
    for (int i = 0; i <= n_; ++i) out[i] = knot(i);
    return out;
  }

  /// {h/2, 3h/2, ..., 1 - h/2}
  std::vector<double> midpoints() const {
    std::vector<double> out(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) out[i] = (i + 0.5) / n_;
    return out;
  }

  /// `density` equal sub-intervals per knot interval, endpoints included
  /// (n * density + 1 points). density = 1 returns the knots.
  std::vector<double> uniform_points(int density) const {
    if (density < 1) throw std::invalid_argument("evaluation density must be >= 1");
    const int m = n_ * density;
    std::vector<double> out(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) out[i] = static_cast<double>(i) / m;
    return out;
  }

  /// Index of the knot within h * rel_tol of x, or -1.
  int knot_index(double x, double rel_tol = 1e-12) const {
    const double t = x * n_;
    const double r = std::nearbyint(t);
    if (r < 0.0 || r > n_) return -1;
    return std::abs(x - r / n_) <= h_ * rel_tol ? static_cast<int>(r) : -1;
  }

 private:
  int n_;
  double h_;
};

}  // namespace tpsmix
