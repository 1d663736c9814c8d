#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpsmix/config.hpp"
#include "tpsmix/interpolation_system.hpp"
#include "tpsmix/peano_kernel.hpp"
#include "tpsmix/power_function.hpp"
#include "tpsmix/rate_analysis.hpp"

namespace tpsmix {

namespace csvfmt {

/// Six significant digits, e.g. 4.77388E-01.
inline std::string value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5E", v);
  return buf;
}

inline std::string exponent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace csvfmt

inline const std::vector<int>& default_table_n_list() {
  static const std::vector<int> v = {128, 256, 512, 1024, 2048};
  return v;
}

inline const std::vector<int>& default_small_n_list() {
  static const std::vector<int> v = {64, 128, 256, 512, 1024};
  return v;
}

/// Which of the four mixed-power tables a mu belongs to.
inline int table_index(double mu) {
  if (mu <= 1.0) return 1;
  if (mu <= 2.0) return 2;
  if (mu <= 3.0) return 3;
  return 4;
}

// ---------------------------------------------------------------------------
// Mixed power tables
// ---------------------------------------------------------------------------

struct TableRow {
  int n = 0;
  double h = 0.0;
  double value = 0.0;           ///< max over midpoints
  double boundary_value = 0.0;  ///< value at x = h/2
  double alpha = 0.0;
};

struct TableColumn {
  MuValue mu;
  std::vector<TableRow> rows;
  RateFit fit;
  double reference_exponent = 0.0;
  std::string error;  ///< non-empty if any sweep for this mu failed

  bool ok() const { return error.empty(); }
};

struct TablesResult {
  std::vector<TableColumn> columns;

  bool ok() const {
    for (const auto& c : columns) {
      if (!c.ok()) return false;
    }
    return true;
  }
};

using ProgressFn = std::function<void(const std::string&)>;

inline void finish_fit(TableColumn& col) {
  DecaySeries series{"M_max, mu=" + col.mu.text, {}};
  for (const auto& r : col.rows) series.points.push_back({r.h, r.value});
  col.reference_exponent = conjectured_rate(col.mu.value);
  if (series.points.size() < 2) {
    col.fit = RateFit{};
    return;
  }
  col.fit = fit_with_reference_exponent(series, col.reference_exponent);
  for (std::size_t i = 0; i < col.rows.size(); ++i) col.rows[i].alpha = col.fit.alpha_per_h[i].second;
}

/// Maxima of M_{h,mu} over the midpoints for every (mu, n). One factorization
/// and one set of Lagrange weights per n serve all mu. A failure for one mu
/// marks that column and leaves the others intact.
inline TablesResult compute_tables(const ExperimentConfig& config, const ProgressFn& progress = {}) {
  const std::vector<int> ns = config.n_list_or(default_table_n_list());
  TablesResult result;
  for (const auto& mu : config.mu_list) result.columns.push_back(TableColumn{mu, {}, {}, 0.0, {}});
  std::vector<BasisParam> bases;
  for (const auto& mu : config.mu_list) bases.emplace_back(mu.value);

  for (int n : ns) {
    if (progress) progress("tables: n = " + std::to_string(n));
    std::optional<InterpolationSystem> system;
    try {
      system.emplace(KnotGrid{n}, thin_plate());
    } catch (const std::exception& e) {
      for (auto& col : result.columns) {
        if (col.ok()) col.error = "n = " + std::to_string(n) + ": " + e.what();
      }
      continue;
    }
    const std::vector<double> xs = system->grid().midpoints();
    const std::size_t m = bases.size();
    std::vector<PowerSample> samples(m * xs.size());
    std::vector<std::string> errors(m);
    std::mutex error_mutex;
    parallel_for(xs.size(), config.worker_count(), [&](std::size_t i) {
      const WeightCorrelation corr(system->grid(), system->lagrange_values(xs[i]));
      for (std::size_t k = 0; k < m; ++k) {
        try {
          samples[k * xs.size() + i] = corr.sample(bases[k]);
        } catch (const std::exception& e) {
          std::lock_guard lock(error_mutex);
          if (errors[k].empty()) errors[k] = e.what();
        }
      }
    });
    for (std::size_t k = 0; k < m; ++k) {
      auto& col = result.columns[k];
      if (!col.ok()) continue;
      if (!errors[k].empty()) {
        col.error = errors[k];
        continue;
      }
      TableRow row;
      row.n = n;
      row.h = system->grid().h();
      for (std::size_t i = 0; i < xs.size(); ++i) row.value = std::max(row.value, samples[k * xs.size() + i].value);
      row.boundary_value = samples[k * xs.size()].value;
      col.rows.push_back(row);
    }
  }
  for (auto& col : result.columns) {
    if (col.ok()) finish_fit(col);
  }
  return result;
}

/// CSV for one table: a data row per (mu, n) and a fit row per mu carrying
/// the prefactor c (normalized at the expected rate) and the least-squares
/// global exponent. Failed columns are omitted.
inline std::string tables_csv(const TablesResult& result, int table) {
  std::ostringstream out;
  out << "mu,row,n,h,value,alpha,boundary_value\n";
  for (const auto& col : result.columns) {
    if (!col.ok() || table_index(col.mu.value) != table) continue;
    for (const auto& r : col.rows) {
      out << col.mu.text << ",data," << r.n << ',' << csvfmt::value(r.h) << ',' << csvfmt::value(r.value) << ','
          << csvfmt::exponent(r.alpha) << ',' << csvfmt::value(r.boundary_value) << '\n';
    }
    if (col.rows.size() >= 2) {
      out << col.mu.text << ",fit,,," << csvfmt::value(col.fit.c) << ',' << csvfmt::exponent(col.fit.alpha_global)
          << ",\n";
    }
  }
  return out.str();
}

inline std::string tables_summary(const TablesResult& result) {
  std::ostringstream out;
  for (int t = 1; t <= 4; ++t) {
    bool header = false;
    for (const auto& col : result.columns) {
      if (table_index(col.mu.value) != t) continue;
      if (!header) {
        out << "Table " << t << ": max of the mixed power function over midpoints\n";
        header = true;
      }
      if (!col.ok()) {
        out << "  mu = " << col.mu.text << ": FAILED: " << col.error << "\n";
        continue;
      }
      out << "  mu = " << col.mu.text << "\n";
      out << "    h^-1      M_max        alpha_h   M(h/2)\n";
      for (const auto& r : col.rows) {
        char line[128];
        std::snprintf(line, sizeof line, "    %-8d  %s  %s     %s\n", r.n, csvfmt::value(r.value).c_str(),
                      csvfmt::exponent(r.alpha).c_str(), csvfmt::value(r.boundary_value).c_str());
        out << line;
      }
      out << "    c = " << csvfmt::value(col.fit.c) << " (rate " << csvfmt::exponent(col.reference_exponent)
          << "), least-squares exponent " << csvfmt::exponent(col.fit.alpha_global) << "\n";
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Peano kernel L1 table
// ---------------------------------------------------------------------------

struct PeanoRow {
  int n = 0;
  double h = 0.0;
  double b_boundary = 0.0;  ///< B_h(h/2)
  double beta = 0.0;
  double b_center = 0.0;  ///< B_h((1-h)/2)
  double sigma = 0.0;
};

struct PeanoTable {
  std::vector<PeanoRow> rows;
  RateFit boundary_fit;
  RateFit center_fit;
};

inline constexpr double kPeanoBoundaryRate = 1.5;
inline constexpr double kPeanoCenterRate = 2.0;

inline PeanoTable compute_peano_table(const ExperimentConfig& config, const ProgressFn& progress = {}) {
  PeanoTable table;
  for (int n : config.n_list_or(default_small_n_list())) {
    if (progress) progress("peano-table: n = " + std::to_string(n));
    const InterpolationSystem system{KnotGrid{n}, thin_plate()};
    const double h = system.grid().h();
    PeanoRow row;
    row.n = n;
    row.h = h;
    row.b_boundary = build_kernel(system, h / 2.0).l1_norm();
    row.b_center = build_kernel(system, (1.0 - h) / 2.0).l1_norm();
    table.rows.push_back(row);
  }
  if (table.rows.size() >= 2) {
    DecaySeries left{"B_h(h/2)", {}};
    DecaySeries center{"B_h((1-h)/2)", {}};
    for (const auto& r : table.rows) {
      left.points.push_back({r.h, r.b_boundary});
      center.points.push_back({r.h, r.b_center});
    }
    table.boundary_fit = fit_with_reference_exponent(left, kPeanoBoundaryRate);
    table.center_fit = fit_with_reference_exponent(center, kPeanoCenterRate);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      table.rows[i].beta = table.boundary_fit.alpha_per_h[i].second;
      table.rows[i].sigma = table.center_fit.alpha_per_h[i].second;
    }
  }
  return table;
}

inline std::string peano_table_csv(const PeanoTable& table) {
  std::ostringstream out;
  out << "row,n,h,b_boundary,beta,b_center,sigma\n";
  for (const auto& r : table.rows) {
    out << "data," << r.n << ',' << csvfmt::value(r.h) << ',' << csvfmt::value(r.b_boundary) << ','
        << csvfmt::exponent(r.beta) << ',' << csvfmt::value(r.b_center) << ',' << csvfmt::exponent(r.sigma) << '\n';
  }
  if (table.rows.size() >= 2) {
    out << "fit,,," << csvfmt::value(table.boundary_fit.c) << ',' << csvfmt::exponent(table.boundary_fit.alpha_global)
        << ',' << csvfmt::value(table.center_fit.c) << ',' << csvfmt::exponent(table.center_fit.alpha_global) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Profiles (figure data)
// ---------------------------------------------------------------------------

enum class ProfileKind { mixed3, standard, peano_l1 };

inline ProfileKind parse_profile_kind(const std::string& s) {
  if (s == "mixed3") return ProfileKind::mixed3;
  if (s == "standard") return ProfileKind::standard;
  if (s == "peano_l1") return ProfileKind::peano_l1;
  throw std::invalid_argument("unknown profile kind '" + s + "' (expected mixed3, standard or peano_l1)");
}

struct ProfilePoint {
  double x = 0.0;
  double value = 0.0;
};

inline std::vector<ProfilePoint> compute_profile(const ExperimentConfig& config, ProfileKind kind, int n) {
  const InterpolationSystem system{KnotGrid{n}, thin_plate()};
  const std::vector<double> xs = system.grid().uniform_points(config.eval_density);
  std::vector<ProfilePoint> out(xs.size());
  const BasisParam cubic{3.0};
  parallel_for(xs.size(), config.worker_count(), [&](std::size_t i) {
    double v = 0.0;
    switch (kind) {
      case ProfileKind::mixed3:
        v = WeightCorrelation(system.grid(), system.lagrange_values(xs[i])).sample(cubic).value;
        break;
      case ProfileKind::standard:
        v = standard_power(system, xs[i]).value;
        break;
      case ProfileKind::peano_l1:
        v = build_kernel(system, xs[i]).l1_norm();
        break;
    }
    out[i] = {xs[i], v};
  });
  return out;
}

inline std::string profile_csv(const std::vector<ProfilePoint>& profile) {
  std::ostringstream out;
  out << "x,value\n";
  for (const auto& p : profile) out << csvfmt::value(p.x) << ',' << csvfmt::value(p.value) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Interpolation error demo
// ---------------------------------------------------------------------------

struct TargetFunction {
  std::string name;
  std::function<double(double)> f;
  std::vector<double> second_derivative;  ///< monomial coefficients of f''; empty if not polynomial
};

inline TargetFunction builtin_target(const std::string& name) {
  constexpr double two_pi = 6.283185307179586;
  if (name == "exp") return {name, [](double x) { return std::exp(x); }, {}};
  if (name == "sin2pi") return {name, [](double x) { return std::sin(two_pi * x); }, {}};
  if (name == "runge") {
    return {name, [](double x) { const double t = 2.0 * x - 1.0; return 1.0 / (1.0 + 25.0 * t * t); }, {}};
  }
  if (name == "cubic") return {name, [](double x) { return x * x * x; }, {0.0, 6.0}};
  if (name == "linear") return {name, [](double x) { return 3.0 + 2.0 * x; }, {0.0}};
  throw std::invalid_argument("unknown target '" + name + "' (expected exp, sin2pi, runge, cubic or linear)");
}

struct InterpErrorRow {
  int n = 0;
  double h = 0.0;
  double max_error = 0.0;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  /// max over midpoints of |(f - s)(x) - int K f''|; NaN unless f'' is polynomial
  double peano_residual = std::numeric_limits<double>::quiet_NaN();
};

struct InterpDemo {
  std::string target;
  std::vector<InterpErrorRow> rows;
  std::optional<RateFit> fit;
};

inline constexpr int kErrorSamplesPerInterval = 16;
inline constexpr double kRoundoffErrorFloor = 1e-12;

inline InterpDemo compute_interp_demo(const ExperimentConfig& config, const std::string& target_name,
                                      const ProgressFn& progress = {}) {
  const TargetFunction target = builtin_target(target_name);
  InterpDemo demo;
  demo.target = target.name;
  for (int n : config.n_list_or(default_small_n_list())) {
    if (progress) progress("interp-demo: n = " + std::to_string(n));
    const InterpolationSystem system{KnotGrid{n}, thin_plate()};
    const KnotGrid& grid = system.grid();
    std::vector<double> data(grid.size());
    for (int i = 0; i <= n; ++i) data[i] = target.f(grid.knot(i));
    const InterpolantCoeffs coeffs = system.solve(data);

    const std::vector<double> xs = grid.uniform_points(kErrorSamplesPerInterval);
    std::vector<double> errors(xs.size());
    parallel_for(xs.size(), config.worker_count(), [&](std::size_t i) {
      errors[i] = std::abs(target.f(xs[i]) - evaluate_interpolant(coeffs, grid, system.basis(), xs[i]));
    });
    InterpErrorRow row;
    row.n = n;
    row.h = grid.h();
    for (double e : errors) row.max_error = std::max(row.max_error, e);

    if (!target.second_derivative.empty()) {
      const std::vector<double> mids = grid.midpoints();
      std::vector<double> residuals(mids.size());
      parallel_for(mids.size(), config.worker_count(), [&](std::size_t i) {
        const PiecewiseLinearKernel kernel{grid, system.lagrange_values(mids[i])};
        const double err = target.f(mids[i]) - evaluate_interpolant(coeffs, grid, system.basis(), mids[i]);
        residuals[i] = std::abs(err - kernel.integrate_polynomial(target.second_derivative));
      });
      row.peano_residual = 0.0;
      for (double r : residuals) row.peano_residual = std::max(row.peano_residual, r);
    }
    demo.rows.push_back(row);
  }

  // Errors at roundoff level (affine targets) carry no rate information.
  bool fittable = demo.rows.size() >= 2;
  for (const auto& r : demo.rows) fittable = fittable && r.max_error > kRoundoffErrorFloor;
  if (fittable) {
    DecaySeries series{"max |f - s|, " + target.name, {}};
    for (const auto& r : demo.rows) series.points.push_back({r.h, r.max_error});
    demo.fit = fit_power_law(series);
    for (std::size_t i = 0; i < demo.rows.size(); ++i) demo.rows[i].alpha = demo.fit->alpha_per_h[i].second;
  }
  return demo;
}

inline std::string interp_demo_csv(const InterpDemo& demo) {
  auto opt = [](double v, bool is_exp) {
    if (std::isnan(v)) return std::string{};
    return is_exp ? csvfmt::exponent(v) : csvfmt::value(v);
  };
  std::ostringstream out;
  out << "target,row,n,h,max_error,alpha,peano_residual\n";
  for (const auto& r : demo.rows) {
    out << demo.target << ",data," << r.n << ',' << csvfmt::value(r.h) << ',' << csvfmt::value(r.max_error) << ','
        << opt(r.alpha, true) << ',' << opt(r.peano_residual, false) << '\n';
  }
  if (demo.fit) {
    out << demo.target << ",fit,,," << csvfmt::value(demo.fit->c) << ',' << csvfmt::exponent(demo.fit->alpha_global)
        << ",\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Lebesgue-type constant
// ---------------------------------------------------------------------------

struct LebesgueRow {
  int n = 0;
  double h = 0.0;
  double max_sum_squares = 0.0;
  double argmax = 0.0;
  /// Same maximum restricted to evaluation points that are not knots.
  double max_off_knot = 0.0;
  double argmax_off_knot = 0.0;
};

inline double sum_of_squares(std::span<const double> v) {
  CompensatedSum<double> acc;
  for (double x : v) acc += x * x;
  return acc.value();
}

inline std::vector<LebesgueRow> compute_lebesgue(const ExperimentConfig& config, const ProgressFn& progress = {}) {
  std::vector<LebesgueRow> rows;
  for (int n : config.n_list_or(default_small_n_list())) {
    if (progress) progress("lebesgue: n = " + std::to_string(n));
    const InterpolationSystem system{KnotGrid{n}, thin_plate()};
    const std::vector<double> xs = system.grid().uniform_points(config.eval_density);
    std::vector<double> sums(xs.size());
    parallel_for(xs.size(), config.worker_count(),
                 [&](std::size_t i) { sums[i] = sum_of_squares(system.lagrange_values(xs[i]).v); });
    LebesgueRow row;
    row.n = n;
    row.h = system.grid().h();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (sums[i] > row.max_sum_squares) {
        row.max_sum_squares = sums[i];
        row.argmax = xs[i];
      }
      if (system.grid().knot_index(xs[i]) < 0 && sums[i] > row.max_off_knot) {
        row.max_off_knot = sums[i];
        row.argmax_off_knot = xs[i];
      }
    }
    rows.push_back(row);
  }
  return rows;
}

inline std::string lebesgue_csv(const std::vector<LebesgueRow>& rows) {
  std::ostringstream out;
  out << "n,h,max_sum_squares,argmax,max_off_knot,argmax_off_knot\n";
  for (const auto& r : rows) {
    out << r.n << ',' << csvfmt::value(r.h) << ',' << csvfmt::value(r.max_sum_squares) << ','
        << csvfmt::value(r.argmax) << ',' << csvfmt::value(r.max_off_knot) << ','
        << csvfmt::value(r.argmax_off_knot) << '\n';
  }
  return out.str();
}

}  // namespace tpsmix
