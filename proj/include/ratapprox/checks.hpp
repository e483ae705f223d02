#ifndef RATAPPROX_CHECKS_HPP
#define RATAPPROX_CHECKS_HPP

// Seeded property suites. Each suite draws its own cases from a generator
// seeded by (seed, suite), runs them, and counts violations of its bound.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratapprox/approx_solver.hpp"
#include "ratapprox/experiments.hpp"
#include "ratapprox/geometry.hpp"
#include "ratapprox/hull.hpp"
#include "ratapprox/oracle.hpp"
#include "ratapprox/problem.hpp"
#include "ratapprox/report.hpp"
#include "ratapprox/vip.hpp"

namespace ratapprox {

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;  // largest observed value of the checked quantity
  double limit = 0.0;  // pass bound for that quantity
  std::string note;

  bool passed() const { return cases > 0 && failures == 0; }

  void record(double value) {
    ++cases;
    if (!(value <= limit)) ++failures;
    if (std::isnan(value) || value > worst) worst = value;
  }
};

struct CheckReport {
  std::uint64_t seed = 0;
  std::vector<SuiteResult> suites;

  bool passed() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["passed"] = passed();
    j["suites"] = nlohmann::ordered_json::array();
    for (const SuiteResult& s : suites) {
      nlohmann::ordered_json e;
      e["name"] = s.name;
      e["passed"] = s.passed();
      e["cases"] = s.cases;
      e["failures"] = s.failures;
      e["worst"] = s.worst;
      e["limit"] = s.limit;
      if (!s.note.empty()) e["note"] = s.note;
      j["suites"].push_back(std::move(e));
    }
    return j;
  }
};

using Rng = std::mt19937_64;

namespace detail {

inline Rng suite_rng(std::uint64_t seed, std::uint64_t suite) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(suite)};
  return Rng(seq);
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Vector gaussian(Rng& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

}  // namespace detail

/// Random small instance: registry target, degrees <= 3, 5..40 grid points
/// on [-1, 1], monomial or kernel-power basis.
inline ProblemInstance random_instance(Rng& rng) {
  const auto& reg = target_registry();
  const auto& target = reg[static_cast<std::size_t>(detail::uniform_int(rng, 0, static_cast<int>(reg.size()) - 1))];
  const int n = detail::uniform_int(rng, 0, 3);
  const int m = detail::uniform_int(rng, 0, 3);
  const int points = detail::uniform_int(rng, 5, 40);
  static const Kernel kernels[] = {Kernel::Exp, Kernel::Sin, Kernel::Cos, Kernel::Identity};
  const int pick = detail::uniform_int(rng, 0, 4);
  const BasisSpec basis = pick == 4 ? BasisSpec::monomial() : BasisSpec::function_power(kernels[pick]);
  return ProblemInstance::sample(make_uniform_grid(-1.0, 1.0, points), target.fn, basis, n, basis, m);
}

/// Random point of C with every denominator in [1, ~3].
inline Vector random_feasible_point(const ProblemInstance& inst, Rng& rng) {
  for (double spread = 0.5;; spread *= 0.5) {
    Vector x = detail::gaussian(rng, inst.dim());
    x.tail(inst.m() + 1) *= spread;
    x[inst.n() + 1] += 1.0;
    const double dmin = (inst.H() * inst.b_of(x)).minCoeff();
    if (dmin > 0.05) return x * (detail::uniform(rng, 1.0, 3.0) / dmin);
  }
}

/// Random nonempty polyhedron: halfspaces through a random interior point,
/// pushed outward by up to one unit.
inline Polyhedron random_polyhedron(Rng& rng, Eigen::Index dim, int count, Vector* interior = nullptr) {
  const Vector c = detail::gaussian(rng, dim);
  std::vector<Halfspace> hs;
  for (int i = 0; i < count; ++i) {
    Vector n = detail::gaussian(rng, dim);
    while (n.norm() < 1e-3) n = detail::gaussian(rng, dim);
    hs.push_back({n, n.dot(c) + detail::uniform(rng, 0.0, 1.0)});
  }
  if (interior) *interior = c;
  return Polyhedron(hs);
}

/// Projection by brute force: the nearest feasible point among the
/// projections onto every affine set {A_S y = c_S}, S a subset of the
/// halfspaces. The true projection lies on the affine hull of its active
/// constraints and is the projection onto it, so it is among the
/// candidates. Exponential in the number of halfspaces; meant for <= 12.
inline Vector enumerate_projection(const Polyhedron& poly, const Vector& y, double feas_tol = 1e-9) {
  const auto k = static_cast<int>(poly.size());
  if (k > 16) throw std::invalid_argument("enumeration oracle is limited to 16 halfspaces");
  if (poly.violation(y) <= 0.0) return y;
  Vector best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<Eigen::Index> rows;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) rows.push_back(i);
    }
    const auto s = static_cast<Eigen::Index>(rows.size());
    if (s > poly.dim()) continue;
    Matrix A(s, poly.dim());
    Vector c(s);
    for (Eigen::Index r = 0; r < s; ++r) {
      A.row(r) = poly.normals().row(rows[static_cast<std::size_t>(r)]);
      c[r] = poly.offsets()[rows[static_cast<std::size_t>(r)]];
    }
    const Matrix gram = A * A.transpose();
    const Vector mu = gram.completeOrthogonalDecomposition().solve(Vector(A * y - c));
    const Vector p = y - A.transpose() * mu;
    if ((A * p - c).cwiseAbs().maxCoeff() > feas_tol * std::max(1.0, y.norm())) continue;  // inconsistent
    if (poly.violation(p) > feas_tol * std::max(1.0, y.norm())) continue;
    const double d = (p - y).norm();
    if (d < best_dist) {
      best_dist = d;
      best = p;
    }
  }
  if (best.size() == 0) throw std::runtime_error("enumeration found no feasible candidate");
  return best;
}

// ---------------------------------------------------------------------------
// Suites

using GradientFn = std::function<Vector(const ProblemInstance&, const Vector&, std::size_t)>;

/// sigma_gradient against central differences (step 1e-6) at 200 random
/// feasible points; relative error <= 1e-6.
inline SuiteResult check_gradient(std::uint64_t seed, const GradientFn& grad = [](const ProblemInstance& inst,
                                                                                  const Vector& x, std::size_t i) {
  return sigma_gradient(inst, x, i);
}) {
  SuiteResult s{"gradient_vs_finite_differences", 0, 0, 0.0, 1e-6, "central differences, h = 1e-6"};
  Rng rng = detail::suite_rng(seed, 1);
  for (int c = 0; c < 200; ++c) {
    const ProblemInstance inst = random_instance(rng);
    const Vector x = random_feasible_point(inst, rng);
    const auto i = static_cast<std::size_t>(detail::uniform_int(rng, 0, static_cast<int>(inst.size()) - 1));
    const Vector g = grad(inst, x, i);
    const Vector fd = fd_gradient(inst, x, i, 1e-6);
    s.record((g - fd).norm() / std::max(fd.norm(), std::numeric_limits<double>::min()));
  }
  return s;
}

/// Psi along 500 random segments of C never exceeds the larger endpoint
/// value by more than 1e-12.
inline SuiteResult check_quasi_convexity(std::uint64_t seed) {
  SuiteResult s{"quasi_convexity", 0, 0, 0.0, 1e-12, "Psi(l x + (1-l) y) - max(Psi(x), Psi(y))"};
  Rng rng = detail::suite_rng(seed, 2);
  for (int c = 0; c < 500; ++c) {
    const ProblemInstance inst = random_instance(rng);
    const Vector x = random_feasible_point(inst, rng);
    const Vector y = random_feasible_point(inst, rng);
    const double l = detail::uniform(rng, 0.0, 1.0);
    s.record(psi(inst, Vector(l * x + (1.0 - l) * y)) - std::max(psi(inst, x), psi(inst, y)));
  }
  return s;
}

/// Firm nonexpansiveness and obtuseness of the polyhedral projection on 500
/// random cases, for the given method.
inline std::vector<SuiteResult> check_projection_properties(std::uint64_t seed,
                                                            ProjectionMethod method = ProjectionMethod::ActiveSet) {
  const std::string tag = method == ProjectionMethod::ActiveSet ? "active_set" : "dykstra";
  SuiteResult firm{"projection_firmly_nonexpansive_" + tag, 0, 0, -std::numeric_limits<double>::infinity(), 1e-8,
                   "|Py-Py'|^2 - |y-y'|^2 + |(y-Py)-(y'-Py')|^2"};
  SuiteResult obtuse{"projection_obtuse_angle_" + tag, 0, 0, -std::numeric_limits<double>::infinity(), 1e-8,
                     "<y - Py, z - Py> for feasible z"};
  SuiteResult idem{"projection_idempotent_" + tag, 0, 0, 0.0, 1e-8, "|P(Py) - Py|"};
  Rng rng = detail::suite_rng(seed, method == ProjectionMethod::ActiveSet ? 3 : 4);
  ProjectionOptions opt;
  opt.method = method;
  for (int c = 0; c < 500; ++c) {
    const Eigen::Index dim = detail::uniform_int(rng, 2, 6);
    const Polyhedron poly = random_polyhedron(rng, dim, detail::uniform_int(rng, 1, 8));
    const Vector y = detail::gaussian(rng, dim, 3.0);
    const Vector y2 = detail::gaussian(rng, dim, 3.0);
    const Vector py = project_polyhedron(poly, y, opt);
    const Vector py2 = project_polyhedron(poly, y2, opt);
    firm.record((py - py2).squaredNorm() - (y - y2).squaredNorm() + ((y - py) - (y2 - py2)).squaredNorm());
    const Vector z = project_polyhedron(poly, detail::gaussian(rng, dim, 3.0), opt);
    obtuse.record((y - py).dot(z - py));
    idem.record((project_polyhedron(poly, py, opt) - py).norm());
  }
  return {firm, obtuse, idem};
}

/// Dykstra and the active-set projector against the enumeration oracle on
/// 100 random polyhedra (dimension <= 6, <= 8 halfspaces).
inline std::vector<SuiteResult> check_projection_oracle(std::uint64_t seed) {
  SuiteResult dyk{"dykstra_vs_enumeration_oracle", 0, 0, 0.0, 1e-6, "|P_dykstra(y) - P_oracle(y)|"};
  SuiteResult lds{"active_set_vs_enumeration_oracle", 0, 0, 0.0, 1e-6, "|P_active_set(y) - P_oracle(y)|"};
  Rng rng = detail::suite_rng(seed, 5);
  ProjectionOptions d_opt;
  d_opt.method = ProjectionMethod::Dykstra;
  for (int c = 0; c < 100; ++c) {
    const Eigen::Index dim = detail::uniform_int(rng, 1, 6);
    const Polyhedron poly = random_polyhedron(rng, dim, detail::uniform_int(rng, 1, 8));
    const Vector y = detail::gaussian(rng, dim, 3.0);
    const Vector ref = enumerate_projection(poly, y);
    try {
      dyk.record((project_polyhedron(poly, y, d_opt) - ref).norm());
    } catch (const ConvergenceError& e) {
      dyk.record((e.best() - ref).norm());
    }
    lds.record((project_polyhedron(poly, y) - ref).norm());
  }
  return {dyk, lds};
}

/// Basis invariants: element 0 is one, degree n is a prefix of degree n + 1,
/// grid rows match pointwise evaluation bit for bit.
inline SuiteResult check_basis(std::uint64_t seed) {
  SuiteResult s{"basis_prefix_and_rows", 0, 0, 0.0, 0.0, "largest bitwise mismatch"};
  Rng rng = detail::suite_rng(seed, 6);
  for (int c = 0; c < 100; ++c) {
    const ProblemInstance inst = random_instance(rng);
    const BasisSpec& spec = inst.numerator_basis();
    double worst = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const double t = inst.grid()[i];
      const Vector lo = eval_basis(spec, 3, t);
      const Vector hi = eval_basis(spec, 4, t);
      worst = std::max(worst, std::abs(lo[0] - 1.0));
      worst = std::max(worst, (hi.head(4) - lo).cwiseAbs().maxCoeff());
      worst = std::max(worst, (inst.G().row(static_cast<Eigen::Index>(i)).transpose() - eval_basis(spec, inst.n(), t))
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    s.record(worst);
  }
  return s;
}

/// Psi(l x) = Psi(x) for l >= 1, relative error <= 1e-12.
inline SuiteResult check_scale_invariance(std::uint64_t seed) {
  SuiteResult s{"scale_invariance", 0, 0, 0.0, 1e-12, "|Psi(l x) - Psi(x)| / max(1, Psi(x))"};
  Rng rng = detail::suite_rng(seed, 7);
  for (int c = 0; c < 200; ++c) {
    const ProblemInstance inst = random_instance(rng);
    const Vector x = random_feasible_point(inst, rng);
    const double l = detail::uniform(rng, 1.0, 10.0);
    const double p = psi(inst, x);
    s.record(std::abs(psi(inst, Vector(l * x)) - p) / std::max(1.0, p));
  }
  return s;
}

/// Active sets attain Psi within their tolerance, and each generator is
/// sign * gradient at its recorded grid index.
inline SuiteResult check_generators(std::uint64_t seed) {
  SuiteResult s{"active_sets_and_generators", 0, 0, 0.0, 0.0, "count of inconsistent generators or indices"};
  Rng rng = detail::suite_rng(seed, 8);
  for (int c = 0; c < 200; ++c) {
    const ProblemInstance inst = random_instance(rng);
    const Vector x = random_feasible_point(inst, rng);
    const double tol = std::pow(10.0, detail::uniform(rng, -12.0, -1.0));
    const ActiveSets act = active_sets(inst, x, tol);
    const Vector sigma = deviations(inst, x);
    double bad = 0.0;
    if (act.plus.empty() && act.minus.empty()) bad += 1.0;
    for (std::size_t i : act.plus) bad += sigma[static_cast<Eigen::Index>(i)] >= act.psi - tol ? 0.0 : 1.0;
    for (std::size_t i : act.minus) bad += -sigma[static_cast<Eigen::Index>(i)] >= act.psi - tol ? 0.0 : 1.0;
    const GeneratorSet gens = subdiff_generators(inst, x, tol);
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const auto [idx, sign] = gens.provenance[g];
      const auto& pool = sign > 0 ? act.plus : act.minus;
      if (std::find(pool.begin(), pool.end(), idx) == pool.end()) bad += 1.0;
      if ((gens.vectors[g] - static_cast<double>(sign) * sigma_gradient(inst, x, idx)).cwiseAbs().maxCoeff() != 0.0) {
        bad += 1.0;
      }
    }
    s.record(bad);
  }
  return s;
}

/// Minimum-norm hull points: weights in the simplex (1e-10) and no vertex
/// improves on the point (duality gap <= 1e-9 relative).
inline SuiteResult check_hull(std::uint64_t seed) {
  SuiteResult s{"min_norm_hull_point", 0, 0, 0.0, 1e-9, "max of weight defects and relative optimality gap"};
  Rng rng = detail::suite_rng(seed, 9);
  for (int c = 0; c < 200; ++c) {
    const int dim = detail::uniform_int(rng, 1, 8);
    const int count = detail::uniform_int(rng, 1, 30);
    GeneratorSet gens;
    const Vector shift = detail::gaussian(rng, dim, detail::uniform(rng, 0.0, 2.0));
    for (int i = 0; i < count; ++i) gens.vectors.push_back(detail::gaussian(rng, dim) + shift);
    const HullPoint h = min_norm_in_hull(gens, 0.0);
    double scale = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    for (const Vector& v : gens.vectors) {
      scale = std::max(scale, v.squaredNorm());
      lo = std::min(lo, v.dot(h.point));
    }
    Vector rebuilt = Vector::Zero(dim);
    for (int i = 0; i < count; ++i) rebuilt += h.weights[i] * gens.vectors[static_cast<std::size_t>(i)];
    double defect = std::abs(h.weights.sum() - 1.0);
    defect = std::max(defect, std::max(0.0, -h.weights.minCoeff()));
    defect = std::max(defect, (rebuilt - h.point).norm() / std::sqrt(scale));
    const double gap = (h.point.squaredNorm() - lo) / scale;
    s.record(std::max(defect * 0.1, gap));  // weights are held to 1e-10
  }
  return s;
}

/// Level-set feasibility is monotone in z on a z-grid.
inline SuiteResult check_level_set_monotone(std::uint64_t seed) {
  SuiteResult s{"level_set_monotone", 0, 0, 0.0, 0.0, "count of feasible-then-infeasible pairs"};
  Rng rng = detail::suite_rng(seed, 10);
  for (int c = 0; c < 5; ++c) {
    const ProblemInstance inst = random_instance(rng);
    const double top = psi(inst, initial_point(inst).point());
    bool seen_feasible = false;
    double bad = 0.0;
    for (int j = 0; j <= 20; ++j) {
      const LevelSetResult r = level_set_feasible(inst, top * j / 20.0, 1e-9);
      if (r.status == Feasibility::Feasible) seen_feasible = true;
      if (r.status == Feasibility::Infeasible && seen_feasible) bad += 1.0;
    }
    s.record(bad);
  }
  return s;
}

/// Short solves on random instances: logged linesearch tests hold, a rerun
/// is bit-identical, the summary JSON re-evaluates to best_psi, and the
/// oracle value is below the best merit.
inline std::vector<SuiteResult> check_solver_runs(std::uint64_t seed) {
  SuiteResult contract{"linesearch_contract", 0, 0, -std::numeric_limits<double>::infinity(), 0.0,
                       "rhs - lhs of the acceptance test"};
  SuiteResult determinism{"determinism", 0, 0, 0.0, 0.0, "differing records between identical runs"};
  SuiteResult roundtrip{"summary_round_trip", 0, 0, 0.0, 1e-12, "|Psi(summary a, b) - best_psi|"};
  SuiteResult sandwich{"oracle_sandwich", 0, 0, -std::numeric_limits<double>::infinity(), 1e-6,
                       "oracle value - best_psi"};
  SuiteResult csv_merit{"iterate_csv_merit", 0, 0, 0.0, 1e-12, "|logged psi - Psi(x_k)| on 10 rows"};
  Rng rng = detail::suite_rng(seed, 11);
  for (int c = 0; c < 4; ++c) {
    const ProblemInstance inst = random_instance(rng);
    SolveConfig cfg;
    cfg.max_iter = 60;
    cfg.variant = c % 2 == 0 ? Variant::V1 : Variant::V2;
    const RunReport a = solve_approximation(inst, cfg);
    const RunReport b = solve_approximation(inst, cfg);
    for (const IterateRecord& r : a.records) {
      if (r.u.size() > 0) contract.record(r.ls_rhs - r.ls_lhs);
    }
    double diff = a.records.size() == b.records.size() ? 0.0 : 1.0;
    for (std::size_t k = 0; k < std::min(a.records.size(), b.records.size()); ++k) {
      const IterateRecord& p = a.records[k];
      const IterateRecord& q = b.records[k];
      if (p.x != q.x || p.merit != q.merit || p.alpha != q.alpha || p.residual != q.residual) diff += 1.0;
    }
    determinism.record(diff);

    const nlohmann::json j = nlohmann::json::parse(summary_json(a, inst.n()).dump());
    const CoefficientPair back = coefficients_from_summary(j);
    roundtrip.record(std::abs(psi(inst, back.point()) - j.at("best_psi").get<double>()));

    const MinimaxResult orc = bisection_minimax(inst);
    sandwich.record(orc.value - a.best_merit);

    const std::size_t step = std::max<std::size_t>(1, a.records.size() / 10);
    for (std::size_t k = 0; k < a.records.size(); k += step) {
      csv_merit.record(std::abs(a.records[k].merit - psi(inst, a.records[k].x)));
    }
  }
  return {contract, determinism, roundtrip, sandwich, csv_merit};
}

// ---------------------------------------------------------------------------
// Runs with known solutions

struct KnownRun {
  std::string label;
  RunReport report;
  KnownSolution solution;
};

/// The four exactly representable rows used for the Fejer and separation
/// checks, both variants, table2 defaults.
inline std::vector<ExperimentRow> representable_rows() {
  const ExperimentTable t = table2();
  std::vector<ExperimentRow> rows;
  for (const ExperimentRow& r : t.rows) {
    const bool pick = (r.function == "one" && r.n == 1) || (r.function == "runge" && r.n == 1) ||
                      (r.function == "ratl1" && r.n == 1) || (r.function == "ratl2" && r.n == 2);
    if (pick) rows.push_back(r);
  }
  return rows;
}

inline std::vector<KnownRun> run_representable_rows() {
  const ExperimentTable t = table2();
  std::vector<KnownRun> out;
  for (const ExperimentRow& row : representable_rows()) {
    const ProblemInstance inst = make_instance(row);
    const KnownSolution sol = *known_solution(inst, row);
    for (Variant v : {Variant::V1, Variant::V2}) {
      SolveConfig cfg = t.config;
      cfg.variant = v;
      out.push_back({row.label() + " V" + std::to_string(static_cast<int>(v)),
                     solve_approximation(inst, cfg, sol, t.tolerance), sol});
    }
  }
  return out;
}

/// dist(x^{k+1}, S*) <= dist(x^k, S*) + 1e-6 from the first update on, and
/// <u_alpha, x* - x_bar> <= 1e-8 for the solution ray points nearest x_bar
/// and at lambda_min.
inline std::vector<SuiteResult> check_known_runs(const std::vector<KnownRun>& runs) {
  SuiteResult fejer{"fejer_monotonicity", 0, 0, -std::numeric_limits<double>::infinity(), 1e-6,
                    "dist(x^{k+1}, S*) - dist(x^k, S*)"};
  SuiteResult sep{"separation", 0, 0, -std::numeric_limits<double>::infinity(), 1e-8, "<u_alpha, x* - x_bar>"};
  for (const KnownRun& run : runs) {
    const Vector dir = run.solution.direction();
    const auto& recs = run.report.records;
    for (std::size_t k = 1; k + 1 < recs.size(); ++k) {
      fejer.record(distance_to_solution(recs[k + 1].x, run.solution) - distance_to_solution(recs[k].x, run.solution));
    }
    for (const IterateRecord& r : recs) {
      if (r.u_alpha.size() == 0) continue;
      const double lambda = std::max(r.x_bar.dot(dir) / dir.squaredNorm(), run.solution.lambda_min);
      sep.record(r.u_alpha.dot(lambda * dir - r.x_bar));
      sep.record(r.u_alpha.dot(run.solution.lambda_min * dir - r.x_bar));
    }
  }
  std::ostringstream note;
  note << runs.size() << " runs";
  fejer.note += "; " + note.str();
  sep.note += "; " + note.str();
  return {fejer, sep};
}

// ---------------------------------------------------------------------------
// Subdifferential along a converging sequence

struct ExampleDemo {
  struct Point {
    int n = 0;              // perturbation 1/n; 0 marks the limit point
    double psi = 0.0;
    double expected = 0.0;  // 1 + 1/n
    std::size_t generators = 0;
    double limit_gap = 0.0;  // farthest limit generator from this point's generators
  };
  std::string grid;
  std::vector<Point> points;
  std::size_t limit_generators = 0;
  bool passed = false;
};

/// f = 0, numerator degree 2, denominator degree 0, x_n = (-1, 1/n, 2, 1)
/// converging to (-1, 0, 2, 1). At the limit three grid points are active
/// (t = 0, +1, -1); along the sequence only t = 1 is, so some generators at
/// the limit stay a fixed distance from every generator at x_n. Generators
/// use a 1e-9 tolerance.
inline ExampleDemo example_demo(const Grid& grid, std::vector<int> ns = {10, 100, 1000}) {
  ExampleDemo out;
  std::ostringstream g;
  g << grid.size() << " points on [" << grid.lo() << ", " << grid.hi() << "]";
  out.grid = g.str();
  const ProblemInstance inst =
      ProblemInstance::sample(grid, [](double) { return 0.0; }, BasisSpec::monomial(), 2, BasisSpec::monomial(), 0);
  Vector limit(4);
  limit << -1.0, 0.0, 2.0, 1.0;
  const GeneratorSet at_limit = subdiff_generators(inst, limit, 1e-9);
  out.limit_generators = at_limit.size();
  bool ok = at_limit.size() >= 3 && std::abs(psi(inst, limit) - 1.0) <= 4 * std::numeric_limits<double>::epsilon();
  for (int n : ns) {
    Vector x(4);
    x << -1.0, 1.0 / n, 2.0, 1.0;
    ExampleDemo::Point p;
    p.n = n;
    p.psi = psi(inst, x);
    p.expected = 1.0 + 1.0 / n;
    const GeneratorSet gens = subdiff_generators(inst, x, 1e-9);
    p.generators = gens.size();
    for (const Vector& v : at_limit.vectors) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const Vector& u : gens.vectors) nearest = std::min(nearest, (u - v).norm());
      p.limit_gap = std::max(p.limit_gap, nearest);
    }
    ok = ok && p.limit_gap > 0.5 && std::abs(p.psi - p.expected) <= 4 * std::numeric_limits<double>::epsilon() && p.generators == 1;
    out.points.push_back(p);
  }
  out.passed = ok;
  return out;
}

inline SuiteResult check_example(const Grid& grid, std::vector<int> ns = {10, 100, 1000}) {
  const ExampleDemo d = example_demo(grid, std::move(ns));
  SuiteResult s{"example_not_inner_semicontinuous", 0, 0, 0.0, 0.0, d.grid};
  s.record(d.passed ? 0.0 : 1.0);
  std::ostringstream note;
  note << "; limit generators " << d.limit_generators;
  for (const auto& p : d.points) {
    note << "; n=" << p.n << " psi=" << format_number(p.psi) << " generators=" << p.generators
         << " limit_gap=" << format_number(p.limit_gap);
  }
  s.note += note.str();
  return s;
}

/// Grid {-1, 0, 1} and the 21-point uniform grid, both containing 0 and +-1.
inline std::vector<SuiteResult> check_examples() {
  return {check_example(Grid::from_points({-1.0, 0.0, 1.0})), check_example(make_uniform_grid(-1.0, 1.0, 21))};
}

// ---------------------------------------------------------------------------

struct CheckOptions {
  bool known_runs = true;  // the representable-row solves take about a minute
};

/// Every suite for one seed. The known-solution runs are deterministic and
/// do not depend on the seed.
inline CheckReport run_checks(std::uint64_t seed, const CheckOptions& opt = {}) {
  CheckReport r;
  r.seed = seed;
  auto add = [&](std::vector<SuiteResult> v) { r.suites.insert(r.suites.end(), v.begin(), v.end()); };
  r.suites.push_back(check_basis(seed));
  r.suites.push_back(check_gradient(seed));
  r.suites.push_back(check_quasi_convexity(seed));
  r.suites.push_back(check_scale_invariance(seed));
  r.suites.push_back(check_generators(seed));
  add(check_projection_properties(seed, ProjectionMethod::ActiveSet));
  add(check_projection_properties(seed, ProjectionMethod::Dykstra));
  add(check_projection_oracle(seed));
  r.suites.push_back(check_hull(seed));
  r.suites.push_back(check_level_set_monotone(seed));
  add(check_solver_runs(seed));
  add(check_examples());
  if (opt.known_runs) add(check_known_runs(run_representable_rows()));
  return r;
}

}  // namespace ratapprox

#endif  // RATAPPROX_CHECKS_HPP
