#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpsmix/basis.hpp"
#include "tpsmix/compensated_sum.hpp"
#include "tpsmix/interpolation_system.hpp"
#include "tpsmix/knot_grid.hpp"
#include "tpsmix/parallel.hpp"

namespace tpsmix {

/// Radicands below -kRadicandRelTol * (magnitude of the double sum) are
/// rejected; anything between that and zero is clamped to zero.
inline constexpr double kRadicandRelTol = 1e-10;

/// The kernel quadratic form
///   Q(v) = (-1)^(m+1) ( sum_jk v_j v_k phi(hj - hk) - 2 sum_j v_j phi(x - hj) )
/// on a given grid, with phi and m = floor(gamma/2) taken from `basis`.
struct QuadraticFormSpec {
  KnotGrid grid;
  BasisParam basis;

  double sign() const { return basis.form_sign(); }
};

/// The two sums of the quadratic form, kept apart for diagnostics.
struct QuadraticFormTerms {
  double double_sum = 0.0;
  double cross_sum = 0.0;
  double magnitude = 0.0;  ///< sum of |terms| in the double sum
  double sign = 1.0;

  double value() const { return sign * (double_sum - 2.0 * cross_sum); }
};

class CancellationError : public std::runtime_error {
 public:
  CancellationError(int n, double x, double radicand, double magnitude)
      : std::runtime_error(describe(n, x, radicand, magnitude)),
        n_(n), x_(x), radicand_(radicand) {}

  int n() const { return n_; }
  double x() const { return x_; }
  double radicand() const { return radicand_; }

 private:
  static std::string describe(int n, double x, double radicand, double magnitude) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "negative power-function radicand beyond cancellation tolerance: n = " << n
        << ", x = " << x << ", radicand = " << radicand << ", double-sum magnitude = " << magnitude;
    return msg.str();
  }

  int n_;
  double x_;
  double radicand_;
};

struct PowerSample {
  double x = 0.0;
  double value = 0.0;     ///< sqrt(max(radicand, 0))
  double radicand = 0.0;  ///< squared power function before clamping
};

struct MidpointSweep {
  double mu = 0.0;
  int n = 0;
  std::vector<PowerSample> samples;
  double max_value = 0.0;
  double argmax = 0.0;

  /// Value at the first midpoint h/2.
  double boundary_value() const { return samples.empty() ? 0.0 : samples.front().value; }
};

/// Autocorrelation c_d = sum_j v_j v_{j+d} of a weight vector together with
/// its evaluation point. The double sum of any quadratic form on an
/// equispaced grid is sum_d (2 - [d == 0]) c_d phi(hd), so one O(n^2) pass
/// serves every basis exponent.
class WeightCorrelation {
 public:
  WeightCorrelation(const KnotGrid& grid, double x, std::span<const double> v)
      : grid_(grid), x_(x), v_(v.begin(), v.end()), lags_(v.size()) {
    if (v.size() != grid.size()) {
      throw std::invalid_argument("weight vector length " + std::to_string(v.size()) +
                                  " does not match grid size " + std::to_string(grid.size()));
    }
    const std::size_t len = v_.size();
    for (std::size_t d = 0; d < len; ++d) {
      CompensatedSum<double> acc;
      for (std::size_t j = 0; j + d < len; ++j) acc += v_[j] * v_[j + d];
      lags_[d] = acc.value();
    }
  }

  WeightCorrelation(const KnotGrid& grid, const LagrangeWeights& w)
      : WeightCorrelation(grid, w.x, w.v) {}

  double x() const { return x_; }
  std::span<const double> weights() const { return v_; }
  std::span<const double> lags() const { return lags_; }

  QuadraticFormTerms terms(const BasisParam& basis) const {
    QuadraticFormTerms t;
    t.sign = basis.form_sign();
    CompensatedSum<double> dsum;
    double magnitude = 0.0;
    // phi(0) = 0 for every admissible exponent, so the d = 0 lag drops out.
    for (std::size_t d = 1; d < lags_.size(); ++d) {
      const double term = 2.0 * lags_[d] * basis(grid_.knot(static_cast<int>(d)));
      dsum += term;
      magnitude += std::abs(term);
    }
    CompensatedSum<double> cross;
    for (std::size_t j = 0; j < v_.size(); ++j) {
      if (v_[j] != 0.0) cross += v_[j] * basis(x_ - grid_.knot(static_cast<int>(j)));
    }
    t.double_sum = dsum.value();
    t.cross_sum = cross.value();
    t.magnitude = magnitude;
    return t;
  }

  PowerSample sample(const BasisParam& basis) const {
    const QuadraticFormTerms t = terms(basis);
    PowerSample s;
    s.x = x_;
    s.radicand = t.value();
    if (s.radicand < -kRadicandRelTol * t.magnitude) {
      throw CancellationError(grid_.n(), x_, s.radicand, t.magnitude);
    }
    s.value = std::sqrt(std::max(s.radicand, 0.0));
    return s;
  }

 private:
  KnotGrid grid_;
  double x_;
  std::vector<double> v_;
  std::vector<double> lags_;
};

/// Q(v) for an arbitrary weight vector; no positivity is assumed.
inline double quadratic_form(const QuadraticFormSpec& spec, double x, std::span<const double> v) {
  return WeightCorrelation(spec.grid, x, v).terms(spec.basis).value();
}

/// Standard power function P_{h,gamma}(x): the quadratic form of the
/// system's own basis at its own Lagrange weights.
inline PowerSample standard_power(const InterpolationSystem& system, double x) {
  const WeightCorrelation corr(system.grid(), system.lagrange_values(x));
  return corr.sample(system.basis());
}

namespace detail {

inline void require_tps(const InterpolationSystem& system) {
  if (system.basis().gamma() != 2.0) {
    throw std::invalid_argument("mixed power function needs the thin plate spline (gamma = 2) system");
  }
}

inline BasisParam mixed_basis(double mu) {
  if (!(mu > 0.0 && mu < 4.0)) {
    throw std::invalid_argument("mixed power exponent must lie in (0, 4), got " + std::to_string(mu));
  }
  return BasisParam{mu};
}

}  // namespace detail

/// Mixed power function M_{h,mu}(x): the phi_mu quadratic form evaluated at
/// the thin plate spline Lagrange weights.
inline PowerSample mixed_power(const InterpolationSystem& tps_system, double mu, double x) {
  detail::require_tps(tps_system);
  const BasisParam basis = detail::mixed_basis(mu);
  const WeightCorrelation corr(tps_system.grid(), tps_system.lagrange_values(x));
  return corr.sample(basis);
}

/// Mixed power functions for several exponents over the midpoint set. The
/// Lagrange weights and their autocorrelation are computed once per point
/// and shared by all exponents.
inline std::vector<MidpointSweep> midpoint_sweeps(const InterpolationSystem& tps_system,
                                                  std::span<const double> mus,
                                                  unsigned threads = 1) {
  detail::require_tps(tps_system);
  std::vector<BasisParam> bases;
  bases.reserve(mus.size());
  for (double mu : mus) bases.push_back(detail::mixed_basis(mu));

  const std::vector<double> xs = tps_system.grid().midpoints();
  std::vector<MidpointSweep> out(mus.size());
  for (std::size_t k = 0; k < mus.size(); ++k) {
    out[k].mu = mus[k];
    out[k].n = tps_system.grid().n();
    out[k].samples.resize(xs.size());
  }
  parallel_for(xs.size(), threads, [&](std::size_t i) {
    const WeightCorrelation corr(tps_system.grid(), tps_system.lagrange_values(xs[i]));
    for (std::size_t k = 0; k < bases.size(); ++k) out[k].samples[i] = corr.sample(bases[k]);
  });
  for (auto& sweep : out) {
    for (const auto& s : sweep.samples) {
      if (s.value > sweep.max_value) {
        sweep.max_value = s.value;
        sweep.argmax = s.x;
      }
    }
  }
  return out;
}

inline MidpointSweep midpoint_sweep(const InterpolationSystem& tps_system, double mu,
                                    unsigned threads = 1) {
  const double mus[] = {mu};
  return std::move(midpoint_sweeps(tps_system, mus, threads).front());
}

}  // namespace tpsmix
