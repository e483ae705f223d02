#ifndef RATAPPROX_EXPERIMENTS_HPP
#define RATAPPROX_EXPERIMENTS_HPP

// The three benchmark tables: rows, per-table solver defaults, and a runner
// that turns one (row, variant) pair into a RunReport.
//
//   table1  unknown solution, monomial bases, dense grid M = 2001, best of
//           200 iterations
//   table2  exactly representable targets, monomial bases, stop at
//           Psi <= 1e-3, distance to the known solution ray logged
//   table3  f = (sin t - cos t) / (t + 2) with kernel-power bases, stop at
//           Psi <= 1e-2

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ratapprox/approx_solver.hpp"
#include "ratapprox/basis.hpp"
#include "ratapprox/problem.hpp"
#include "ratapprox/vip.hpp"

namespace ratapprox {

struct ExperimentRow {
  std::string function;
  BasisSpec basis;  // numerator and denominator share it
  int n = 0;
  int m = 0;
  int points = 2001;
  // exact representation (a*, b*) when the target has one
  std::optional<Vector> a_star;
  std::optional<Vector> b_star;

  std::string label() const {
    return function + " " + basis.describe() + " (" + std::to_string(n) + "," + std::to_string(m) +
           ") M=" + std::to_string(points);
  }
};

struct ExperimentTable {
  std::string name;
  std::vector<ExperimentRow> rows;
  SolveConfig config;  // variant is set per run
  ActiveTolerance tolerance;
};

inline ProblemInstance make_instance(const ExperimentRow& row, double lo = -1.0, double hi = 1.0) {
  const auto f = find_target(row.function);
  if (!f) throw std::invalid_argument("unknown target function '" + row.function + "'");
  return ProblemInstance::sample(make_uniform_grid(lo, hi, row.points), *f, row.basis, row.n, row.basis, row.m);
}

inline std::optional<KnownSolution> known_solution(const ProblemInstance& inst, const ExperimentRow& row) {
  if (!row.a_star || !row.b_star) return std::nullopt;
  return KnownSolution::on(inst, *row.a_star, *row.b_star);
}

namespace detail {

inline Vector coeffs(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) out[i++] = c;
  return out;
}

inline ExperimentRow poly_row(std::string fn, int n, int m, int points) {
  return {std::move(fn), BasisSpec::monomial(), n, m, points, std::nullopt, std::nullopt};
}

inline ExperimentRow known_row(std::string fn, int n, int m, int points, Vector a, Vector b) {
  return {std::move(fn), BasisSpec::monomial(), n, m, points, std::move(a), std::move(b)};
}

}  // namespace detail

inline ExperimentTable table1() {
  using detail::poly_row;
  ExperimentTable t;
  t.name = "table1";
  t.rows = {poly_row("abs", 2, 2, 2001),    poly_row("abs", 3, 3, 2001), poly_row("abs", 4, 3, 2001),
            poly_row("sin", 2, 2, 2001),    poly_row("abssin", 3, 3, 2001),
            poly_row("sqrtabs", 4, 4, 2001)};
  t.config.max_iter = 200;
  return t;
}

inline ExperimentTable table2() {
  using detail::coeffs;
  using detail::known_row;
  ExperimentTable t;
  t.name = "table2";
  t.rows = {
      known_row("one", 1, 1, 100, coeffs({1, 0}), coeffs({1, 0})),
      known_row("one", 2, 2, 200, coeffs({1, 0, 0}), coeffs({1, 0, 0})),
      known_row("runge", 1, 2, 100, coeffs({1, 0}), coeffs({1, 0, 1})),
      known_row("runge", 2, 2, 200, coeffs({1, 0, 0}), coeffs({1, 0, 1})),
      known_row("ratl1", 1, 1, 100, coeffs({0, 1}), coeffs({1.5, 1})),
      known_row("ratl1", 2, 2, 200, coeffs({0, 1, 0}), coeffs({1.5, 1, 0})),
      known_row("ratl2", 2, 2, 200, coeffs({-1, 0, 1}), coeffs({2, 1, 0})),
      known_row("ratl2", 3, 2, 100, coeffs({-1, 0, 1, 0}), coeffs({2, 1, 0})),
  };
  t.config.max_iter = 20000;
  t.config.psi_target = 1e-3;
  // Psi* = 0 here, so every generator with nonzero deviation separates
  t.tolerance.rel = 0.9;
  return t;
}

inline ExperimentTable table3() {
  ExperimentTable t;
  t.name = "table3";
  for (Kernel k : {Kernel::Exp, Kernel::Sin}) {
    const BasisSpec b = BasisSpec::function_power(k);
    t.rows.push_back({"sincos", b, 3, 3, 20, std::nullopt, std::nullopt});
    t.rows.push_back({"sincos", b, 3, 3, 100, std::nullopt, std::nullopt});
    t.rows.push_back({"sincos", b, 5, 4, 200, std::nullopt, std::nullopt});
    t.rows.push_back({"sincos", b, 10, 8, 100, std::nullopt, std::nullopt});
  }
  t.config.max_iter = 20000;
  t.config.psi_target = 1e-2;
  return t;
}

inline std::optional<ExperimentTable> find_table(std::string_view name) {
  if (name == "table1") return table1();
  if (name == "table2") return table2();
  if (name == "table3") return table3();
  return std::nullopt;
}

struct RowOutcome {
  RunReport report;
  std::optional<double> final_distance;  // last iterate to the known solution ray
  std::string error;                     // set when the solver threw

  bool failed() const { return !error.empty() || report.stop_reason == StopReason::LinesearchFailure; }
};

/// Runs one row with the table defaults and the given variant. Exceptions
/// from the solver are caught and reported in the outcome.
inline RowOutcome run_row(const ExperimentTable& table, const ExperimentRow& row, Variant variant) {
  RowOutcome out;
  try {
    const ProblemInstance inst = make_instance(row);
    const auto sol = known_solution(inst, row);
    SolveConfig cfg = table.config;
    cfg.variant = variant;
    out.report = solve_approximation(inst, cfg, sol, table.tolerance);
    if (sol && !out.report.records.empty()) out.final_distance = out.report.records.back().dist_to_solution;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace ratapprox

#endif  // RATAPPROX_EXPERIMENTS_HPP
