#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace tpsmix {

/// Radial basis function phi_gamma(x) = |x|^gamma, or |x|^gamma log|x| when
/// gamma is an even integer (gamma = 2 is the thin plate spline).
class BasisParam {
 public:
  explicit BasisParam(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
      throw std::invalid_argument("basis exponent must be positive and finite, got " +
                                  std::to_string(gamma));
    }
    order_ = static_cast<int>(std::floor(gamma / 2.0));
    const double half = gamma / 2.0;
    even_integer_ = half == std::floor(half);
  }

  double gamma() const { return gamma_; }

  /// Degree of the polynomial tail, floor(gamma / 2).
  int order() const { return order_; }

  bool is_even_integer() const { return even_integer_; }

  /// (-1)^(order + 1): the sign making the kernel quadratic form positive on
  /// vectors satisfying the moment constraints.
  double form_sign() const { return order_ % 2 == 0 ? -1.0 : 1.0; }

  double operator()(double x) const {
    const double r = std::abs(x);
    if (r == 0.0) return 0.0;  // continuous limit, also for the log branch
    const double p = std::pow(r, gamma_);
    return even_integer_ ? p * std::log(r) : p;
  }

 private:
  double gamma_;
  int order_ = 0;
  bool even_integer_ = false;
};

inline double basis_eval(const BasisParam& basis, double x) { return basis(x); }

inline BasisParam thin_plate() { return BasisParam{2.0}; }

}  // namespace tpsmix
