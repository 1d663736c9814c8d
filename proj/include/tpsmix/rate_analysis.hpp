#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tpsmix {

struct DecayPoint {
  double h = 0.0;
  double y = 0.0;
};

/// A sequence of positive values indexed by mesh size, e.g. maxima of a
/// power function for h = 1/128, ..., 1/2048.
struct DecaySeries {
  std::string label;
  std::vector<DecayPoint> points;
};

struct RateFit {
  double c = 0.0;
  double alpha_global = 0.0;
  std::vector<std::pair<double, double>> alpha_per_h;  ///< (h, ln(y/c) / ln h)
  double residual = 0.0;                               ///< max log-space deviation of the line
};

/// Exponent alpha with y = c h^alpha for a single point and a given prefactor.
inline double exponent_at(const DecayPoint& p, double c) { return std::log(p.y / c) / std::log(p.h); }

namespace detail {

inline void validate(const DecaySeries& series, std::size_t min_points) {
  if (series.points.size() < min_points) {
    throw std::invalid_argument("series '" + series.label + "' needs at least " +
                                std::to_string(min_points) + " points");
  }
  for (const auto& p : series.points) {
    if (!(p.h > 0.0)) {
      throw std::invalid_argument("series '" + series.label + "': mesh sizes must be positive");
    }
    if (!(p.y > 0.0)) {
      throw std::invalid_argument("series '" + series.label + "': values must be positive, got " +
                                  std::to_string(p.y));
    }
  }
}

inline std::vector<std::pair<double, double>> per_point_exponents(const DecaySeries& series, double c) {
  std::vector<std::pair<double, double>> out;
  out.reserve(series.points.size());
  for (const auto& p : series.points) out.emplace_back(p.h, exponent_at(p, c));
  return out;
}

}  // namespace detail

/// Unweighted least-squares line through (ln h, ln y).
inline RateFit fit_power_law(const DecaySeries& series) {
  detail::validate(series, 2);
  const auto m = static_cast<double>(series.points.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& p : series.points) {
    mean_x += std::log(p.h);
    mean_y += std::log(p.y);
  }
  mean_x /= m;
  mean_y /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : series.points) {
    const double dx = std::log(p.h) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(p.y) - mean_y);
  }
  if (sxx == 0.0) throw std::invalid_argument("series '" + series.label + "': mesh sizes must be distinct");

  RateFit fit;
  fit.alpha_global = sxy / sxx;
  const double log_c = mean_y - fit.alpha_global * mean_x;
  fit.c = std::exp(log_c);
  for (const auto& p : series.points) {
    const double dev = std::abs(std::log(p.y) - log_c - fit.alpha_global * std::log(p.h));
    fit.residual = std::max(fit.residual, dev);
  }
  fit.alpha_per_h = detail::per_point_exponents(series, fit.c);
  return fit;
}

/// Prefactor normalized against a reference exponent:
///   c = mean_i y_i / h_i^reference_exponent,
/// with per-row exponents ln(y/c)/ln h. This is the convention behind the
/// published decay tables, where the reference exponent is the expected rate.
/// The global exponent is still the least-squares slope.
inline RateFit fit_with_reference_exponent(const DecaySeries& series, double reference_exponent) {
  RateFit fit = fit_power_law(series);
  double sum = 0.0;
  for (const auto& p : series.points) sum += p.y / std::pow(p.h, reference_exponent);
  fit.c = sum / static_cast<double>(series.points.size());
  fit.alpha_per_h = detail::per_point_exponents(series, fit.c);
  return fit;
}

/// Exponents log2(y(2h) / y(h)) between consecutive rows. Rows must be
/// ordered by mesh size (either direction) with ratio exactly 2.
inline std::vector<std::pair<double, double>> per_h_exponents_doubling(const DecaySeries& series) {
  detail::validate(series, 2);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < series.points.size(); ++i) {
    const auto& a = series.points[i];
    const auto& b = series.points[i + 1];
    const auto& coarse = a.h > b.h ? a : b;
    const auto& fine = a.h > b.h ? b : a;
    if (std::abs(coarse.h / fine.h - 2.0) > 1e-12) {
      throw std::invalid_argument("series '" + series.label + "': consecutive mesh sizes must differ by a factor of 2");
    }
    out.emplace_back(fine.h, std::log2(coarse.y / fine.y));
  }
  return out;
}

/// Decay rate the tables are normalized against: mu/2 below 3, 3/2 from 3 on.
inline double conjectured_rate(double mu) { return mu < 3.0 ? mu / 2.0 : 1.5; }

}  // namespace tpsmix
