// Acceptance suite: one PASS/FAIL line per criterion, details indented below.
// Exit status is the number of failed criteria (0 on full success).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tpsmix/tpsmix.hpp"

using namespace tpsmix;

namespace {

struct Criterion {
  int id;
  std::string title;
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      details.push_back("FAIL  " + what);
    }
  }
  void note(const std::string& what) { details.push_back("      " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// ---- reference cells ------------------------------------------------------

struct PublishedColumn {
  const char* mu;
  double m_max[5];
  double alpha[5];
  double c;
};

const std::vector<int> kTableN = {128, 256, 512, 1024, 2048};

const std::vector<PublishedColumn> kTable1 = {
    {"1/3", {4.774e-01, 4.253e-01, 3.789e-01, 3.376e-01, 3.007e-01}, {0.167, 0.167, 0.167, 0.167, 0.167}, 1.072},
    {"2/3", {1.768e-01, 1.404e-01, 1.114e-01, 8.842e-02, 7.018e-02}, {0.333, 0.333, 0.333, 0.333, 0.333}, 0.8912},
    {"1", {6.342e-02, 4.485e-02, 3.171e-02, 2.242e-02, 1.586e-02}, {0.500, 0.500, 0.500, 0.500, 0.500}, 0.7175},
};
const std::vector<PublishedColumn> kTable2 = {
    {"4/3", {2.143e-02, 1.350e-02, 8.503e-03, 5.356e-03, 3.374e-03}, {0.667, 0.667, 0.667, 0.667, 0.667}, 0.5442},
    {"5/3", {6.258e-03, 3.512e-03, 1.971e-03, 1.106e-03, 6.208e-04}, {0.833, 0.833, 0.833, 0.833, 0.833}, 0.3568},
};
const std::vector<PublishedColumn> kTable3 = {
    {"7/3", {1.061e-03, 4.727e-04, 2.106e-04, 9.381e-05, 4.179e-05}, {1.167, 1.167, 1.167, 1.167, 1.167}, 0.3049},
    {"8/3", {6.221e-04, 2.473e-04, 9.828e-05, 3.905e-05, 1.551e-05}, {1.334, 1.334, 1.333, 1.333, 1.333}, 0.4024},
    {"3", {3.327e-04, 1.196e-04, 4.296e-05, 1.543e-05, 5.534e-06}, {1.507, 1.503, 1.500, 1.498, 1.496}, 0.4975},
};
const std::vector<PublishedColumn> kTable4 = {
    {"10/3", {2.032e-04, 6.995e-05, 2.419e-05, 8.402e-06, 2.919e-06}, {1.491, 1.497, 1.501, 1.503, 1.505}, 0.2814},
    {"11/3", {1.661e-04, 5.808e-05, 2.039e-05, 7.182e-06, 2.523e-06}, {1.497, 1.499, 1.500, 1.501, 1.502}, 0.2368},
};

struct PublishedPeanoRow {
  int n;
  double b_boundary, beta, b_center, sigma;
};
const std::vector<PublishedPeanoRow> kTable5 = {
    {64, 1.024e-04, 1.491, 3.633e-05, 2.001},   {128, 3.533e-05, 1.498, 9.098e-06, 2.001},
    {256, 1.228e-05, 1.501, 2.293e-06, 1.999},  {512, 4.289e-06, 1.503, 5.694e-07, 2.000},
    {1024, 1.502e-06, 1.504, 1.434e-07, 1.999},
};
constexpr double kPeanoBoundaryPrefactor = 0.05059;
constexpr double kPeanoCenterPrefactor = 0.14955;

// Off-knot plateau of sum_j l_j(x)^2 (eval_density 8), frozen from this implementation.
const std::map<int, double> kFrozenLebesgue = {
    {64, 0.941898}, {128, 0.941865}, {256, 0.941848}, {512, 0.941840}, {1024, 0.941836}};

constexpr double kValueTol = 0.01;
constexpr double kExponentTol = 0.005;
constexpr double kPrefactorTol = 0.02;

// ---- criteria -------------------------------------------------------------

const TableColumn* find_column(const TablesResult& r, const std::string& mu) {
  for (const auto& c : r.columns) {
    if (c.mu.text == mu) return &c;
  }
  return nullptr;
}

void check_table(Criterion& cr, const TablesResult& result, const std::vector<PublishedColumn>& cols) {
  double worst_value = 0.0, worst_alpha = 0.0, worst_c = 0.0, worst_boundary = 0.0;
  for (const auto& pub : cols) {
    const TableColumn* col = find_column(result, pub.mu);
    if (!col || !col->ok() || col->rows.size() != kTableN.size()) {
      cr.check(false, fmt("mu = %s: column missing or failed (%s)", pub.mu, col ? col->error.c_str() : "absent"));
      continue;
    }
    for (std::size_t i = 0; i < kTableN.size(); ++i) {
      const auto& row = col->rows[i];
      const double dv = rel(row.value, pub.m_max[i]);
      const double da = std::abs(row.alpha - pub.alpha[i]);
      worst_value = std::max(worst_value, dv);
      worst_alpha = std::max(worst_alpha, da);
      worst_boundary = std::max(worst_boundary, rel(row.boundary_value, pub.m_max[i]));
      cr.check(dv <= kValueTol, fmt("mu = %s, n = %d: M_max %.5e vs %.3e (rel %.2f%%, tol 1%%)", pub.mu, row.n,
                                    row.value, pub.m_max[i], 100 * dv));
      cr.check(da <= kExponentTol + 1e-12, fmt("mu = %s, n = %d: alpha %.4f vs %.3f (tol 0.005)", pub.mu, row.n,
                                               row.alpha, pub.alpha[i]));
    }
    const double dc = rel(col->fit.c, pub.c);
    worst_c = std::max(worst_c, dc);
    cr.check(dc <= kPrefactorTol, fmt("mu = %s: c %.5f vs %.4f (rel %.2f%%, tol 2%%)", pub.mu, col->fit.c, pub.c, 100 * dc));
  }
  cr.note(fmt("worst M_max rel %.3f%%, worst alpha dev %.4f, worst c rel %.3f%%", 100 * worst_value, worst_alpha,
              100 * worst_c));
  cr.note(fmt("info: value at x = h/2 vs the same cells, worst rel %.3f%%", 100 * worst_boundary));
}

void criterion_peano_table(Criterion& cr, const ExperimentConfig& base) {
  ExperimentConfig config = base;
  config.n_list = {64, 128, 256, 512, 1024};
  const PeanoTable table = compute_peano_table(config);
  if (table.rows.size() != kTable5.size()) {
    cr.check(false, "unexpected number of rows");
    return;
  }
  double worst_b = 0.0, worst_e = 0.0;
  for (std::size_t i = 0; i < kTable5.size(); ++i) {
    const auto& got = table.rows[i];
    const auto& pub = kTable5[i];
    const double db = rel(got.b_boundary, pub.b_boundary), dc = rel(got.b_center, pub.b_center);
    const double dbeta = std::abs(got.beta - pub.beta), dsig = std::abs(got.sigma - pub.sigma);
    worst_b = std::max({worst_b, db, dc});
    worst_e = std::max({worst_e, dbeta, dsig});
    cr.check(db <= 0.02, fmt("n = %d: B(h/2) %.5e vs %.3e (rel %.2f%%)", pub.n, got.b_boundary, pub.b_boundary, 100 * db));
    cr.check(dc <= 0.02, fmt("n = %d: B((1-h)/2) %.5e vs %.3e (rel %.2f%%)", pub.n, got.b_center, pub.b_center, 100 * dc));
    cr.check(dbeta <= 0.01 + 1e-12, fmt("n = %d: beta %.4f vs %.3f", pub.n, got.beta, pub.beta));
    cr.check(dsig <= 0.01 + 1e-12, fmt("n = %d: sigma %.4f vs %.3f", pub.n, got.sigma, pub.sigma));
  }
  const double dl = rel(table.boundary_fit.c, kPeanoBoundaryPrefactor);
  const double dr = rel(table.center_fit.c, kPeanoCenterPrefactor);
  cr.check(dl <= 0.03, fmt("boundary prefactor %.5f vs %.5f (rel %.2f%%)", table.boundary_fit.c, kPeanoBoundaryPrefactor, 100 * dl));
  cr.check(dr <= 0.03, fmt("center prefactor %.5f vs %.5f (rel %.2f%%)", table.center_fit.c, kPeanoCenterPrefactor, 100 * dr));
  cr.note(fmt("worst B rel %.3f%%, worst exponent dev %.4f, prefactors %.5f / %.5f", 100 * worst_b, worst_e,
              table.boundary_fit.c, table.center_fit.c));
}

void criterion_identity(Criterion& cr) {
  // The constant: 4 A_3 / A_1^2 with A_g = -2 Gamma(g+1) sin(g pi / 2).
  const double a1 = oracle::fourier_constant(1.0), a3 = oracle::fourier_constant(3.0);
  const double constant = 4.0 * a3 / (a1 * a1);
  cr.check(std::abs(constant - 12.0) <= 1e-12, fmt("4 A3 / A1^2 = %.15g, expected 12", constant));
  cr.note(fmt("A1 = %.15g, A3 = %.15g, 4 A3 / A1^2 = %.15g", a1, a3, constant));

  for (int n : {16, 64, 256}) {
    const InterpolationSystem tps{KnotGrid{n}, thin_plate()};
    double worst = 0.0, ratio_at_worst = 0.0;
    for (double x : tps.grid().midpoints()) {
      const double m2 = mixed_power(tps, 3.0, x).radicand;
      const double k2 = std::pow(build_kernel(tps, x).l2_norm(), 2);
      const double dev = std::abs(m2 - 12.0 * k2) / m2;
      if (dev >= worst) {
        worst = dev;
        ratio_at_worst = m2 / k2;
      }
    }
    cr.check(worst <= 1e-8, fmt("n = %d: max rel deviation %.3e (tol 1e-8)", n, worst));
    cr.note(fmt("n = %4d: max rel deviation %.3e, M^2 / ||K||^2 = %.12f", n, worst, ratio_at_worst));
  }
}

void criterion_properties(Criterion& cr) {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::size_t checks = 0;
  auto check = [&](bool ok, const std::string& what) {
    ++checks;
    cr.check(ok, what);
  };

  for (int n : {4, 16, 64, 512}) {
    const InterpolationSystem tps{KnotGrid{n}, thin_plate()};
    const KnotGrid& g = tps.grid();
    const double h = g.h();
    const double tol = 1e-15 * std::max(1.0, tps.condition_estimate());

    // cardinality
    double card = 0.0;
    for (int i = 0; i <= n; i += std::max(1, n / 8)) {
      const auto w = tps.lagrange_values(g.knot(i));
      for (int j = 0; j <= n; ++j) card = std::max(card, std::abs(w.v[j] - (i == j ? 1.0 : 0.0)));
    }
    check(card <= 1e-12, fmt("cardinality n = %d: %.2e", n, card));

    // moment identities and reflection symmetry
    double moments = 0.0, reflect = 0.0;
    for (int t = 0; t < 20; ++t) {
      const double x = unif(rng);
      const auto w = tps.lagrange_values(x);
      const auto r = tps.lagrange_values(1.0 - x);
      CompensatedSum<double> s0, s1;
      for (int j = 0; j <= n; ++j) {
        s0 += w.v[j];
        s1 += w.v[j] * g.knot(j);
        reflect = std::max(reflect, std::abs(w.v[j] - r.v[n - j]));
      }
      moments = std::max({moments, std::abs(s0.value() - 1.0), std::abs(s1.value() - x)});
    }
    check(moments <= 100 * tol, fmt("moment identities n = %d: %.2e", n, moments));
    check(reflect <= 100 * tol, fmt("reflection symmetry n = %d: %.2e", n, reflect));

    // polynomial reproduction and side conditions
    std::vector<double> affine(g.size()), noise(g.size());
    for (int i = 0; i <= n; ++i) {
      affine[i] = -0.7 + 2.5 * g.knot(i);
      noise[i] = unif(rng) - 0.5;
    }
    const auto ca = tps.solve(affine);
    double repro = 0.0;
    for (int t = 0; t < 50; ++t) {
      const double x = unif(rng);
      repro = std::max(repro, std::abs(evaluate_interpolant(ca, g, tps.basis(), x) - (-0.7 + 2.5 * x)));
    }
    check(repro <= 1e-9, fmt("affine reproduction n = %d: %.2e", n, repro));
    const auto cn = tps.solve(noise);
    CompensatedSum<double> a0, a1;
    double a_l1 = 0.0;
    for (int k = 0; k <= n; ++k) {
      a0 += cn.a[k];
      a1 += cn.a[k] * g.knot(k);
      a_l1 += std::abs(cn.a[k]);
    }
    const double side = std::max(std::abs(a0.value()), std::abs(a1.value())) / a_l1;
    check(side <= 1e-9, fmt("side conditions n = %d: %.2e", n, side));

    // knot vanishing and mu = 2 consistency
    double knots = 0.0;
    for (int i = 0; i <= n; i += std::max(1, n / 8)) {
      knots = std::max({knots, standard_power(tps, g.knot(i)).value, mixed_power(tps, 3.0, g.knot(i)).value,
                        mixed_power(tps, 1.0 / 3.0, g.knot(i)).value});
    }
    check(knots == 0.0, fmt("knot vanishing n = %d: %.2e", n, knots));
    double consistency = 0.0;
    for (int t = 0; t < 10; ++t) {
      const double x = unif(rng);
      const double p = standard_power(tps, x).value;
      consistency = std::max(consistency, std::abs(mixed_power(tps, 2.0, x).value - p) / p);
    }
    check(consistency <= 1e-10, fmt("mu = 2 consistency n = %d: %.2e", n, consistency));

    // Peano kernel: compact support and exact norms vs quadrature
    for (double x : {h / 2, unif(rng), 1.0 - h / 2}) {
      const auto k = build_kernel(tps, x);
      const double outside = std::max({std::abs(k(-0.25)), std::abs(k(-1e-14)), std::abs(k(1.0 + 1e-14)), std::abs(k(3.0))});
      check(outside == 0.0, fmt("Peano compact support n = %d, x = %.4f", n, x));
      if (n > 64) continue;
      const std::vector<double> v(k.weights().begin(), k.weights().end());
      const auto kinks = oracle::kink_points(n, x);
      auto kv = [&](double u) { return oracle::peano_abs_form(n, x, v, u); };
      const double l2 = std::sqrt(oracle::aligned_simpson(kinks, 20000, [&](double u) { return kv(u) * kv(u); }));
      const double l1 = oracle::l1_by_quadrature(kinks, 20000, kv);
      check(rel(k.l2_norm(), l2) <= 1e-9, fmt("L2 norm vs quadrature n = %d, x = %.4f: %.2e", n, x, rel(k.l2_norm(), l2)));
      check(rel(k.l1_norm(), l1) <= 1e-9, fmt("L1 norm vs quadrature n = %d, x = %.4f: %.2e", n, x, rel(k.l1_norm(), l1)));
    }

    // error representation for u^3: e(x) = int K(u) 6u du
    if (n <= 64) {
      std::vector<double> cube(g.size());
      for (int i = 0; i <= n; ++i) cube[i] = std::pow(g.knot(i), 3);
      const auto cc = tps.solve(cube);
      double worst = 0.0;
      for (double x : g.midpoints()) {
        const double err = x * x * x - evaluate_interpolant(cc, g, tps.basis(), x);
        worst = std::max(worst, std::abs(err - build_kernel(tps, x).integrate_polynomial(std::vector<double>{0.0, 6.0})));
      }
      check(worst <= 1e-9, fmt("Peano representation of u^3, n = %d: %.2e", n, worst));
    }
  }

  // variational minimality
  for (int n : {4, 8, 16}) {
    const InterpolationSystem tps{KnotGrid{n}, thin_plate()};
    const QuadraticFormSpec spec{tps.grid(), thin_plate()};
    bool minimal = true;
    for (double x : {0.5 / n, unif(rng), 0.5}) {
      const auto w = tps.lagrange_values(x);
      const double q0 = quadratic_form(spec, x, w.v);
      for (int t = 0; t < 100; ++t) {
        auto v = w.v;
        const auto dv = oracle::feasible_perturbation(n, rng, std::pow(10.0, -3.0 + (t % 4)));
        for (int j = 0; j <= n; ++j) v[j] += dv[j];
        minimal = minimal && quadratic_form(spec, x, v) >= q0 - 1e-10;
      }
    }
    check(minimal, fmt("variational minimality n = %d", n));
  }
  cr.note(fmt("%zu property checks", checks));
}

void criterion_conjecture(Criterion& cr, const TablesResult& result) {
  const std::vector<std::pair<std::string, double>> targets = {
      {"1/3", 1.0 / 6.0}, {"2/3", 1.0 / 3.0}, {"1", 0.5}, {"4/3", 2.0 / 3.0}, {"5/3", 5.0 / 6.0},
      {"3", 1.5},         {"10/3", 1.5},      {"11/3", 1.5}};
  for (const auto& [mu, want] : targets) {
    const TableColumn* col = find_column(result, mu);
    if (!col || !col->ok()) {
      cr.check(false, "mu = " + mu + ": column missing or failed");
      continue;
    }
    const double tol = want < 1.0 ? 0.02 : 0.03;
    const double got = col->fit.alpha_global;
    cr.check(std::abs(got - want) <= tol, fmt("mu = %s: alpha %.4f vs %.4f (tol %.2f)", mu.c_str(), got, want, tol));
    cr.note(fmt("mu = %-4s global exponent %.4f (target %.4f)", mu.c_str(), got, want));
  }
}

void criterion_interp(Criterion& cr, const ExperimentConfig& base) {
  ExperimentConfig config = base;
  config.n_list = {64, 128, 256, 512, 1024};
  const auto smooth = compute_interp_demo(config, "exp");
  if (!smooth.fit) {
    cr.check(false, "exp: no fit");
  } else {
    const double a = smooth.fit->alpha_global;
    cr.check(a >= 1.40 && a <= 1.60, fmt("exp: exponent %.4f outside [1.40, 1.60]", a));
    cr.note(fmt("exp: uniform-error exponent %.4f", a));
  }
  const auto affine = compute_interp_demo(config, "linear");
  double worst = 0.0;
  for (const auto& r : affine.rows) worst = std::max(worst, r.max_error);
  cr.check(worst <= 1e-9, fmt("affine target: max error %.2e", worst));
  cr.note(fmt("affine target: max error %.2e", worst));
}

void criterion_lebesgue(Criterion& cr, const ExperimentConfig& base) {
  ExperimentConfig config = base;
  config.n_list = {64, 128, 256, 512, 1024};
  config.eval_density = 8;
  const auto rows = compute_lebesgue(config);
  double lo = INFINITY, hi = 0.0, lo_off = INFINITY, hi_off = 0.0;
  for (const auto& r : rows) {
    lo = std::min(lo, r.max_sum_squares);
    hi = std::max(hi, r.max_sum_squares);
    lo_off = std::min(lo_off, r.max_off_knot);
    hi_off = std::max(hi_off, r.max_off_knot);
    const auto frozen = kFrozenLebesgue.find(r.n);
    if (frozen != kFrozenLebesgue.end()) {
      cr.check(rel(r.max_off_knot, frozen->second) <= 1e-5,
               fmt("n = %d: off-knot max %.6f vs frozen %.6f", r.n, r.max_off_knot, frozen->second));
    }
    cr.note(fmt("n = %4d: max %.6f, off-knot max %.6f at x = %.6g", r.n, r.max_sum_squares, r.max_off_knot,
                r.argmax_off_knot));
  }
  cr.check(rows.size() == 5, "expected five rows");
  cr.check(hi / lo < 1.5, fmt("maxima ratio %.4f", hi / lo));
  cr.check(hi_off / lo_off < 1.5, fmt("off-knot maxima ratio %.4f", hi_off / lo_off));
}

}  // namespace

int main() {
  ExperimentConfig config;
  config.deterministic = true;
  config.mu_list = default_mu_list();

  std::vector<Criterion> results;
  auto run = [&](int id, const std::string& title, auto&& body) {
    Criterion cr{id, title};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(cr);
    } catch (const std::exception& e) {
      cr.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %d. %s (%.1f s)\n", cr.pass ? "PASS" : "FAIL", cr.id, cr.title.c_str(), secs);
    for (const auto& d : cr.details) std::printf("        %s\n", d.c_str());
    std::fflush(stdout);
    results.push_back(cr);
  };

  TablesResult tables;
  run(1, "Table 1 (mu = 1/3, 2/3, 1): M_max 1%, alpha 0.005, c 2%", [&](Criterion& cr) {
    config.n_list = kTableN;
    tables = compute_tables(config);
    check_table(cr, tables, kTable1);
  });
  run(2, "Table 3 (mu = 7/3, 8/3, 3): M_max 1%, alpha 0.005, c 2%",
      [&](Criterion& cr) { check_table(cr, tables, kTable3); });
  run(3, "Tables 2 and 4 (mu = 4/3, 5/3, 10/3, 11/3): M_max 1%, alpha 0.005, c 2%", [&](Criterion& cr) {
    check_table(cr, tables, kTable2);
    check_table(cr, tables, kTable4);
  });
  run(4, "Peano L1 table: B 2%, beta/sigma 0.01, prefactors 3%",
      [&](Criterion& cr) { criterion_peano_table(cr, config); });
  run(5, "M_{h,3}^2 = 12 ||K||_2^2 at midpoints, n = 16, 64, 256 (rel 1e-8)", criterion_identity);
  run(6, "property suite (n <= 512)", criterion_properties);
  run(7, "global exponents: |alpha - mu/2| <= 0.02 (mu < 2), |alpha - 1.5| <= 0.03 (mu >= 3)",
      [&](Criterion& cr) { criterion_conjecture(cr, tables); });
  run(8, "interpolation demo: exp exponent in [1.40, 1.60], affine error <= 1e-9",
      [&](Criterion& cr) { criterion_interp(cr, config); });
  run(9, "sum of squared Lagrange values: maxima vary by < 1.5x over n = 64..1024",
      [&](Criterion& cr) { criterion_lebesgue(cr, config); });

  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::printf("%d of %zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed;
}
