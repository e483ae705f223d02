#ifndef RATAPPROX_VIP_HPP
#define RATAPPROX_VIP_HPP

// Projection/linesearch solver for variational inequalities with a
// point-to-set operator T over a polyhedron C:
//
//   find x* in C and u* in T(x*) with <u*, x - x*> >= 0 for all x in C.
//
// T is supplied as a sampler returning a finite generator set whose convex
// hull is T(x). The operator is expected to be closed, bounded on bounded
// sets, and to have coinciding primal and dual solution sets (pseudo-monotone
// operators qualify); the solver does not check these.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ratapprox/error.hpp"
#include "ratapprox/geometry.hpp"
#include "ratapprox/hull.hpp"
#include "ratapprox/problem.hpp"

namespace ratapprox {

template <class Op>
concept OperatorSampler = requires(const Op& op, const Vector& x) {
  { op(x) } -> std::convertible_to<GeneratorSet>;
};

template <class F>
concept PointFunction = requires(const F& f, const Vector& x) {
  { f(x) } -> std::convertible_to<double>;
};

template <class P>
concept Projector = requires(const P& p, const Vector& x) {
  { p(x) } -> std::convertible_to<Vector>;
};

struct LinesearchParams {
  double beta = 1.0;
  double delta = 0.5;
  double theta = 0.5;
  double alpha_min = 1e-12;
  /// Try the minimum-norm element of conv T(x) before the generators.
  bool min_norm_first = true;
  /// Smallest alpha tried for the minimum-norm element before the joint sweep.
  double min_norm_alpha_floor = 1e-2;
  /// Extra minimum-norm candidates taken over the generators whose activity
  /// slack is within slack_ratio^j of the largest, j = 1..hull_levels-1.
  int hull_levels = 4;
  double slack_ratio = 0.5;
  /// Report u_alpha as the aggregate of T(x_alpha)'s generators whose single
  /// cut matches projecting onto all of their cuts, when it passes the test.
  bool aggregate_cut = true;

  void validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("linesearch beta must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("linesearch delta must lie in (0, 1)");
    if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("linesearch theta must lie in (0, 1)");
    if (!(alpha_min > 0.0)) throw std::invalid_argument("linesearch alpha_min must be positive");
    if (hull_levels < 1) throw std::invalid_argument("linesearch hull_levels must be at least 1");
    if (!(slack_ratio > 0.0 && slack_ratio < 1.0)) throw std::invalid_argument("linesearch slack_ratio must lie in (0, 1)");
  }
};

struct LinesearchResult {
  double alpha = 1.0;
  Vector u;        // element of T(x) whose trial point was accepted
  Vector u_alpha;  // generator of T(x_alpha) attaining the maximum
  Vector z;        // P_C(x - beta * u)
  std::size_t generator = 0;  // candidate index; the min-norm element, when tried, is index 0
  int trials = 0;  // operator evaluations spent

  /// <u_alpha, x - z> and delta * <u, x - z>, the two sides of the acceptance test.
  double lhs = 0.0;
  double rhs = 0.0;
};

class LinesearchFailure : public std::runtime_error {
 public:
  LinesearchFailure(const std::string& what, std::size_t generators, int trials)
      : std::runtime_error(what), generators_(generators), trials_(trials) {}

  std::size_t generators_tried() const { return generators_; }
  int trials() const { return trials_; }

 private:
  std::size_t generators_;
  int trials_;
};

/// Minimum-norm element of conv(gens); the lone generator when there is one.
inline Vector min_norm_element(const GeneratorSet& gens) {
  if (gens.size() == 1) return gens.vectors.front();
  try {
    return min_norm_point(gens.vectors, 0.0).point;
  } catch (const ConvergenceError& e) {
    return e.best();
  }
}

/// Convex combination w of `normals` such that the halfspace {y : <w, y> <= 0}
/// is the one that projecting `shift` onto the cone {y : <n_j, y> <= 0 for
/// all j} effectively enforces: w is P_{cone(normals)}(shift), normalised to
/// unit weight sum. Empty when shift already lies in the cone's polar side.
inline std::optional<Vector> aggregate_normal(const std::vector<Vector>& normals, const Vector& shift) {
  Matrix W(shift.size(), static_cast<Eigen::Index>(normals.size()));
  for (std::size_t j = 0; j < normals.size(); ++j) W.col(static_cast<Eigen::Index>(j)) = normals[j];
  const double tol = 1e-14 * std::max(1.0, W.cwiseAbs().maxCoeff() * shift.cwiseAbs().maxCoeff());
  const NnlsResult sol = nnls(W, shift, tol, 10 * static_cast<int>(normals.size()) + 10);
  const double total = sol.solution.sum();
  if (!(total > 0.0)) return std::nullopt;
  return Vector(W * sol.solution / total);
}

/// Backtracking linesearch over candidates u in T(x). Each candidate has the
/// trial point z_u = P_C(x - beta u). For alpha = 1, theta, theta^2, ...
/// the candidates are tried in order; u is accepted when some generator
/// u_alpha of T(alpha z_u + (1 - alpha) x) satisfies
///   <u_alpha, x - z_u> >= delta <u, x - z_u>.
/// Alpha shrinks only when every candidate fails at the current alpha.
///
/// Candidates are the generators, preceded by the minimum-norm element of
/// their hull when params.min_norm_first is set and there is more than one.
/// With min_norm_first the hull element (and, for hull_levels > 1, the hull
/// elements of the generators within shrinking activity slack) are first
/// backtracked on their own down to min_norm_alpha_floor, keeping the
/// accepted one whose cut H(x_bar, u_alpha) is farthest from x. If none is
/// accepted the joint sweep runs from alpha = 1 over all candidates.
template <OperatorSampler Op, Projector Proj>
LinesearchResult linesearch_G(const Op& T, const Proj& projectC, const Vector& x, const GeneratorSet& at_x,
                              const LinesearchParams& params) {
  params.validate();
  if (at_x.empty()) throw std::invalid_argument("operator returned no generators");
  std::vector<Vector> cand;
  std::size_t leading = 0;  // hull candidates backtracked before the sweep
  if (params.min_norm_first && at_x.size() > 1) {
    // an approximate hull point is still an element of T(x)
    cand.push_back(min_norm_element(at_x));
    if (params.hull_levels > 1 && at_x.slack.size() == at_x.size()) {
      double level = *std::max_element(at_x.slack.begin(), at_x.slack.end());
      std::size_t previous = at_x.size();
      for (int j = 1; j < params.hull_levels; ++j) {
        level *= params.slack_ratio;
        GeneratorSet sub;
        for (std::size_t i = 0; i < at_x.size(); ++i) {
          if (at_x.slack[i] <= level) sub.vectors.push_back(at_x.vectors[i]);
        }
        if (sub.empty()) break;
        if (sub.size() == previous) continue;
        previous = sub.size();
        cand.push_back(min_norm_element(sub));
      }
    }
    leading = cand.size();
  }
  cand.insert(cand.end(), at_x.vectors.begin(), at_x.vectors.end());
  const std::size_t count = cand.size();
  std::vector<Vector> trial(count);
  std::vector<Vector> gap(count);
  std::vector<double> rhs(count);
  std::vector<char> ready(count, 0);
  auto prepare = [&](std::size_t g) {
    if (ready[g]) return;
    trial[g] = projectC(Vector(x - params.beta * cand[g]));
    gap[g] = x - trial[g];
    rhs[g] = params.delta * cand[g].dot(gap[g]);
    ready[g] = 1;
  };

  int trials = 0;
  std::optional<LinesearchResult> found;
  auto attempt = [&](std::size_t g, double alpha) {
    prepare(g);
    const Vector x_alpha = alpha * trial[g] + (1.0 - alpha) * x;
    ++trials;
    if constexpr (requires { { T.max_inner(x_alpha, gap[g]) } -> std::convertible_to<double>; }) {
      // cheap rejection; the full set is only built for an accepted trial
      if (!(T.max_inner(x_alpha, gap[g]) >= rhs[g])) return false;
    }
    const GeneratorSet at_alpha = T(x_alpha);
    if (at_alpha.empty()) throw std::invalid_argument("operator returned no generators");
    std::size_t best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < at_alpha.size(); ++j) {
      const double v = at_alpha.vectors[j].dot(gap[g]);
      if (v > best_val) {
        best_val = v;
        best = j;
      }
    }
    if (!(best_val >= rhs[g])) return false;
    LinesearchResult out;
    out.alpha = alpha;
    out.u = cand[g];
    out.u_alpha = at_alpha.vectors[best];
    if (params.aggregate_cut && at_alpha.size() > 1) {
      if (auto agg = aggregate_normal(at_alpha.vectors, Vector(alpha * gap[g]))) {
        const double v = agg->dot(gap[g]);
        if (v >= rhs[g]) {
          out.u_alpha = std::move(*agg);
          best_val = v;
        }
      }
    }
    out.z = trial[g];
    out.generator = g;
    out.lhs = best_val;
    out.rhs = rhs[g];
    found = std::move(out);
    return true;
  };

  // Each hull candidate backtracks on its own; the accepted one whose cut
  // lies farthest from x wins.
  std::optional<LinesearchResult> chosen;
  double chosen_dist = -1.0;
  for (std::size_t g = 0; g < leading; ++g) {
    for (double alpha = 1.0; alpha >= std::max(params.alpha_min, params.min_norm_alpha_floor); alpha *= params.theta) {
      if (attempt(g, alpha)) {
        const double norm = found->u_alpha.norm();
        const double dist = norm > 0.0 ? alpha * found->lhs / norm : 0.0;
        if (dist > chosen_dist) {
          chosen_dist = dist;
          chosen = std::move(found);
        }
        break;
      }
    }
  }
  if (chosen) {
    chosen->trials = trials;
    return *chosen;
  }
  for (double alpha = 1.0; alpha >= params.alpha_min; alpha *= params.theta) {
    for (std::size_t g = 0; g < count; ++g) {
      if (g < leading && alpha >= params.min_norm_alpha_floor) continue;
      if (attempt(g, alpha)) {
        found->trials = trials;
        return *found;
      }
    }
  }
  throw LinesearchFailure("linesearch found no acceptable step above alpha_min for any of " +
                              std::to_string(count) + " candidates",
                          count, trials);
}

template <OperatorSampler Op, Projector Proj>
LinesearchResult linesearch_G(const Op& T, const Proj& projectC, const Vector& x, const LinesearchParams& params) {
  return linesearch_G(T, projectC, x, T(x), params);
}

/// P_C(P_H(x)) with H = H(x_bar, u_alpha).
inline Vector step_variant_1(const Vector& x, const Vector& x_bar, const Vector& u_alpha, const Polyhedron& C,
                             const ProjectionOptions& opt = {}) {
  const Halfspace H = halfspace_from(x_bar, u_alpha);
  return project_polyhedron(C, project_halfspace(H, x), opt);
}

/// P_{C n H}(x) with H = H(x_bar, u_alpha) appended after C's halfspaces.
inline Vector step_variant_2(const Vector& x, const Vector& x_bar, const Vector& u_alpha, const Polyhedron& C,
                             const ProjectionOptions& opt = {}) {
  const Halfspace H = halfspace_from(x_bar, u_alpha);
  return project_polyhedron(C.with(H), x, opt);
}

enum class Variant { V1 = 1, V2 = 2 };

enum class StopReason { StepFixedPoint, NaturalResidual, MeritTarget, MaxIter, LinesearchFailure };

inline std::string_view stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::StepFixedPoint: return "StepFixedPoint";
    case StopReason::NaturalResidual: return "NaturalResidual";
    case StopReason::MeritTarget: return "MeritTarget";
    case StopReason::MaxIter: return "MaxIter";
    case StopReason::LinesearchFailure: return "LinesearchFailure";
  }
  return "?";
}

struct SolveConfig {
  Variant variant = Variant::V2;
  int max_iter = 1000;
  double step_tol = 1e-10;
  double residual_tol = 1e-8;
  std::optional<double> psi_target;
  LinesearchParams linesearch;
  /// Per-iteration step sizes; iteration k uses entry min(k, size - 1).
  /// Empty means the constant linesearch.beta.
  std::vector<double> beta_schedule;
  ProjectionOptions projection;

  double beta_at(int k) const {
    if (beta_schedule.empty()) return linesearch.beta;
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(k), beta_schedule.size() - 1);
    return beta_schedule[idx];
  }

  void validate() const {
    linesearch.validate();
    if (max_iter < 0) throw std::invalid_argument("max_iter must be nonnegative");
    if (!(step_tol > 0.0)) throw std::invalid_argument("step_tol must be positive");
    if (!(residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be positive");
    for (double b : beta_schedule) {
      if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("beta schedule entries must be positive");
    }
  }
};

struct IterateRecord {
  int k = 0;
  Vector x;
  double merit = 0.0;
  double alpha = 0.0;
  double step_norm = 0.0;
  double residual = 0.0;
  std::optional<double> dist_to_solution;
  // Linesearch outcome at this iterate; empty on the terminal record.
  Vector u;
  Vector u_alpha;
  Vector z;
  Vector x_bar;
  double ls_lhs = 0.0;
  double ls_rhs = 0.0;
};

struct RunReport {
  std::vector<IterateRecord> records;
  StopReason stop_reason = StopReason::MaxIter;
  std::string message;
  Vector best_x;
  double best_merit = std::numeric_limits<double>::infinity();
  int best_iter = 0;
  std::chrono::duration<double> wall_time{0};

  /// Number of completed updates x^k -> x^{k+1}.
  int iterations() const {
    int n = 0;
    for (const auto& r : records) {
      if (r.u.size() > 0) ++n;
    }
    return n;
  }
};

/// min over generators v of || x - P_C(x - v) ||.
template <Projector Proj>
double natural_residual(const Proj& projectC, const Vector& x, const GeneratorSet& gens) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vector& v : gens.vectors) {
    best = std::min(best, (x - projectC(Vector(x - v))).norm());
  }
  return best;
}

/// Projection/linesearch method. The natural residual is taken at the
/// minimum-norm element of T(x) when linesearch.min_norm_first is set, and
/// minimised over the generators otherwise. Each iteration runs the linesearch, forms
/// x_bar = alpha z + (1 - alpha) x, and moves by the configured variant onto
/// the separating halfspace H(x_bar, u_alpha) (and C). Stops on a fixed point
/// (z = x or x^{k+1} = x^k within step_tol), merit at or below psi_target,
/// a natural residual below residual_tol, or max_iter. The merit target is
/// tested first.
///
/// Projection failures inside the loop propagate as ConvergenceError.
template <OperatorSampler Op, PointFunction Merit>
RunReport solve(const Op& T, const Merit& merit, const Polyhedron& C, const Vector& x0, const SolveConfig& config,
                const std::function<double(const Vector&)>& distance = {}) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto projectC = [&](const Vector& y) { return project_polyhedron(C, y, config.projection); };

  RunReport report;
  Vector x = projectC(x0);

  auto finish = [&](StopReason why) {
    report.stop_reason = why;
    report.wall_time = std::chrono::steady_clock::now() - start;
    for (const auto& r : report.records) {
      if (r.merit < report.best_merit) {
        report.best_merit = r.merit;
        report.best_x = r.x;
        report.best_iter = r.k;
      }
    }
    return report;
  };

  for (int k = 0;; ++k) {
    IterateRecord rec;
    rec.k = k;
    rec.x = x;
    const GeneratorSet gens = T(x);
    if (gens.empty()) throw std::invalid_argument("operator returned no generators");
    rec.merit = merit(x);
    rec.residual = config.linesearch.min_norm_first ? (x - projectC(Vector(x - min_norm_element(gens)))).norm()
                                                    : natural_residual(projectC, x, gens);
    if (distance) rec.dist_to_solution = distance(x);

    if (config.psi_target && rec.merit <= *config.psi_target) {
      report.records.push_back(std::move(rec));
      return finish(StopReason::MeritTarget);
    }
    if (rec.residual <= config.residual_tol) {
      report.records.push_back(std::move(rec));
      return finish(StopReason::NaturalResidual);
    }
    if (k >= config.max_iter) {
      report.records.push_back(std::move(rec));
      return finish(StopReason::MaxIter);
    }

    LinesearchParams params = config.linesearch;
    params.beta = config.beta_at(k);
    LinesearchResult ls;
    try {
      ls = linesearch_G(T, projectC, x, gens, params);
    } catch (const LinesearchFailure& e) {
      report.message = e.what();
      report.records.push_back(std::move(rec));
      return finish(StopReason::LinesearchFailure);
    }
    if ((ls.z - x).norm() <= config.step_tol) {
      report.records.push_back(std::move(rec));
      return finish(StopReason::StepFixedPoint);
    }

    Vector x_bar = ls.alpha * ls.z + (1.0 - ls.alpha) * x;
    Vector next = config.variant == Variant::V1 ? step_variant_1(x, x_bar, ls.u_alpha, C, config.projection)
                                                : step_variant_2(x, x_bar, ls.u_alpha, C, config.projection);
    rec.alpha = ls.alpha;
    rec.step_norm = (next - x).norm();
    rec.u = std::move(ls.u);
    rec.u_alpha = std::move(ls.u_alpha);
    rec.z = std::move(ls.z);
    rec.x_bar = std::move(x_bar);
    rec.ls_lhs = ls.lhs;
    rec.ls_rhs = ls.rhs;
    const double step = rec.step_norm;
    report.records.push_back(std::move(rec));
    if (step <= config.step_tol) return finish(StopReason::StepFixedPoint);
    x = std::move(next);
  }
}

}  // namespace ratapprox

#endif  // RATAPPROX_VIP_HPP
