#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpsmix/basis.hpp"
#include "tpsmix/knot_grid.hpp"

namespace tpsmix {

/// Raised when the saddle matrix is singular to working precision.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition_estimate() const { return condition_; }

 private:
  double condition_;
};

/// Kernel weights a_k and polynomial tail b_l of
///   s(x) = sum_k a_k phi(x - hk) + sum_l b_l x^l.
struct InterpolantCoeffs {
  std::vector<double> a;
  std::vector<double> b;
};

/// Values of the cardinal functions l_0(x), ..., l_n(x) at a point x.
struct LagrangeWeights {
  double x = 0.0;
  std::vector<double> v;
};

/// Symmetric saddle-point system
///
///   [ Phi  P ] [a]   [f]
///   [ P^T  0 ] [b] = [0],   Phi_jk = phi(hj - hk),  P_jl = (hj)^l,
///
/// factorized once by pivoted LU. Immutable after construction, so a single
/// instance may serve concurrent solves.
class InterpolationSystem {
 public:
  /// Systems whose 1-norm condition estimate exceeds this get one step of
  /// iterative refinement per solve.
  static constexpr double kRefineAbove = 1e8;

  InterpolationSystem(KnotGrid grid, BasisParam basis) : grid_(grid), basis_(basis) {
    if (grid_.n() < basis_.order()) {
      throw std::invalid_argument("need n >= floor(gamma/2): n = " + std::to_string(grid_.n()) +
                                  ", gamma = " + std::to_string(basis_.gamma()));
    }
    assemble();
    factorize();
  }

  const KnotGrid& grid() const { return grid_; }
  const BasisParam& basis() const { return basis_; }
  const Eigen::MatrixXd& saddle_matrix() const { return matrix_; }
  double condition_estimate() const { return condition_; }

  std::size_t kernel_size() const { return grid_.size(); }
  std::size_t tail_size() const { return static_cast<std::size_t>(basis_.order()) + 1; }
  std::size_t dimension() const { return kernel_size() + tail_size(); }

  /// Solves the full saddle system, refining once when ill-conditioned.
  Eigen::VectorXd solve_full(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd sol = lu_.solve(rhs);
    if (condition_ > kRefineAbove) {
      const Eigen::VectorXd residual = rhs - matrix_ * sol;
      sol += lu_.solve(residual);
    }
    return sol;
  }

  InterpolantCoeffs solve(std::span<const double> values) const {
    if (values.size() != kernel_size()) {
      throw std::invalid_argument("expected " + std::to_string(kernel_size()) +
                                  " data values, got " + std::to_string(values.size()));
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension()));
    for (std::size_t i = 0; i < values.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = values[i];
    const Eigen::VectorXd sol = solve_full(rhs);
    InterpolantCoeffs c;
    c.a.assign(sol.data(), sol.data() + kernel_size());
    c.b.assign(sol.data() + kernel_size(), sol.data() + dimension());
    return c;
  }

  /// Cardinal function values at x from a single solve with right-hand side
  /// (phi(x - h0), ..., phi(x - hn), 1, x, ..., x^m). The matrix is symmetric,
  /// so this is the transposed system and reuses the same factorization.
  LagrangeWeights lagrange_values(double x) const {
    LagrangeWeights w;
    w.x = x;
    w.v.assign(kernel_size(), 0.0);
    if (const int i = grid_.knot_index(x); i >= 0) {
      w.v[static_cast<std::size_t>(i)] = 1.0;
      return w;
    }
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(dimension()));
    const int n = grid_.n();
    for (int j = 0; j <= n; ++j) rhs[j] = basis_(x - grid_.knot(j));
    double power = 1.0;
    for (std::size_t l = 0; l < tail_size(); ++l) {
      rhs[static_cast<Eigen::Index>(kernel_size() + l)] = power;
      power *= x;
    }
    const Eigen::VectorXd sol = solve_full(rhs);
    std::copy(sol.data(), sol.data() + kernel_size(), w.v.begin());
    return w;
  }

 private:
  void assemble() {
    const int n = grid_.n();
    const auto dim = static_cast<Eigen::Index>(dimension());
    const auto nk = static_cast<Eigen::Index>(kernel_size());
    matrix_ = Eigen::MatrixXd::Zero(dim, dim);

    // Phi is Toeplitz: entries depend only on |j - k|.
    std::vector<double> diag(kernel_size());
    for (int d = 0; d <= n; ++d) diag[d] = basis_(grid_.knot(d));
    for (Eigen::Index j = 0; j < nk; ++j) {
      for (Eigen::Index k = 0; k < nk; ++k) matrix_(j, k) = diag[std::abs(j - k)];
    }
    for (Eigen::Index j = 0; j < nk; ++j) {
      double power = 1.0;
      for (std::size_t l = 0; l < tail_size(); ++l) {
        const auto col = nk + static_cast<Eigen::Index>(l);
        matrix_(j, col) = power;
        matrix_(col, j) = power;
        power *= grid_.knot(static_cast<int>(j));
      }
    }
  }

  void factorize() {
    lu_.compute(matrix_);
    const double rcond = lu_.rcond();
    condition_ = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(rcond > std::numeric_limits<double>::epsilon())) {
      std::ostringstream msg;
      msg << "saddle matrix is singular to working precision (n = " << grid_.n()
          << ", gamma = " << basis_.gamma() << ", condition estimate = " << condition_ << ")";
      throw SingularSystemError(msg.str(), condition_);
    }
  }

  KnotGrid grid_;
  BasisParam basis_;
  Eigen::MatrixXd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double condition_ = 0.0;
};

inline InterpolationSystem assemble_system(const KnotGrid& grid, const BasisParam& basis) {
  return InterpolationSystem{grid, basis};
}

inline InterpolantCoeffs solve_interpolant(const InterpolationSystem& system,
                                           std::span<const double> values) {
  return system.solve(values);
}

inline LagrangeWeights lagrange_values(const InterpolationSystem& system, double x) {
  return system.lagrange_values(x);
}

inline double evaluate_interpolant(const InterpolantCoeffs& coeffs, const KnotGrid& grid,
                                   const BasisParam& basis, double x) {
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs.a.size(); ++k) {
    s += coeffs.a[k] * basis(x - grid.knot(static_cast<int>(k)));
  }
  double tail = 0.0;
  for (auto it = coeffs.b.rbegin(); it != coeffs.b.rend(); ++it) tail = tail * x + *it;
  return s + tail;
}

}  // namespace tpsmix
