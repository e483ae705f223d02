#ifndef RATAPPROX_APPROX_SOLVER_HPP
#define RATAPPROX_APPROX_SOLVER_HPP

// Binds the VIP solver to the approximation problem: T is the Clarke
// subdifferential of Psi, C is the feasible set. Psi is pseudo-convex, so
// its subdifferential is pseudo-monotone and the VIP solutions are exactly
// the global minimisers.

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>

#include "ratapprox/geometry.hpp"
#include "ratapprox/problem.hpp"
#include "ratapprox/vip.hpp"

namespace ratapprox {

/// Active-point tolerance at a point with objective value psi:
/// max(floor, rel * psi).
///
/// The default is loose on purpose. With exact active sets the iterates stall
/// at kinks of Psi, where one deviation briefly leaves the active set and
/// the trial steps shrink to nothing. Each sigma_i is linear-fractional, so a
/// gradient of any point with |sigma_i(x)| above the optimal value still
/// separates x from the solutions. That holds for every generator as long
/// as (1 - rel) Psi(x) exceeds the optimal value, and always when it is 0.
struct ActiveTolerance {
  double rel = 0.3;
  double floor = 1e-12;

  double at(double psi_value) const { return std::max(floor, rel * psi_value); }
};

/// Operator sampler for the subdifferential of Psi, with active points taken
/// within ActiveTolerance of Psi(x).
///
/// Closedness holds because limits of active points are active; the
/// generators are bounded on bounded subsets of C because denominators are
/// at least one there.
class SubdifferentialOperator {
 public:
  SubdifferentialOperator(const ProblemInstance& inst, ActiveTolerance tol = {}, double feasibility_margin = 1e-6)
      : inst_(&inst), tol_(tol), margin_(feasibility_margin) {
    if (!(tol.rel >= 0.0) || !(tol.floor >= 0.0)) throw std::invalid_argument("active tolerance must be nonnegative");
  }

  GeneratorSet operator()(const Vector& x) const {
    const Vector sigma = checked_deviations(x);
    const double psi_value = sigma.cwiseAbs().maxCoeff();
    return generators_from_deviations(*inst_, x, sigma, tol_.at(psi_value));
  }

  /// max over the generators at x of <g, v>. Same arithmetic as building the
  /// set and taking the dot products, so the linesearch can reject a trial
  /// without allocating it.
  double max_inner(const Vector& x, const Vector& v) const {
    const Vector sigma = checked_deviations(x);
    const ActiveSets act = active_sets_from(sigma, tol_.at(sigma.cwiseAbs().maxCoeff()));
    const Eigen::Index na = inst_->n() + 1;
    const Eigen::Index nb = inst_->m() + 1;
    Vector g(na + nb);
    double best = -std::numeric_limits<double>::infinity();
    auto visit = [&](std::size_t i, int sign) {
      const auto row = static_cast<Eigen::Index>(i);
      const double d = inst_->denominator(x, i);
      const double p = inst_->numerator(x, i);
      g.head(na) = -inst_->G().row(row).transpose() / d;
      g.tail(nb) = inst_->H().row(row).transpose() * (p / (d * d));
      if (sign < 0) g = -g;
      best = std::max(best, g.dot(v));
    };
    if (act.psi == 0.0) {
      for (std::size_t i = 0; i < inst_->size(); ++i) {
        visit(i, -1);
        visit(i, +1);
      }
    } else {
      for (std::size_t i : act.plus) visit(i, +1);
      for (std::size_t i : act.minus) visit(i, -1);
    }
    return best;
  }

  const ProblemInstance& instance() const { return *inst_; }

 private:
  Vector checked_deviations(const Vector& x) const {
    inst_->check_dim(x);
    for (std::size_t i = 0; i < inst_->size(); ++i) {
      const double d = inst_->denominator(x, i);
      if (!(d >= 1.0 - margin_)) {
        throw InfeasiblePointError("operator queried outside the feasible set at grid index " + std::to_string(i), i,
                                   d);
      }
    }
    return deviations(*inst_, x);
  }

  const ProblemInstance* inst_;
  ActiveTolerance tol_;
  double margin_;
};

inline SubdifferentialOperator build_operator(const ProblemInstance& inst, ActiveTolerance tol = {}) {
  return SubdifferentialOperator(inst, tol);
}

/// a = 0, b = (1, 0, ..., 0): every denominator is exactly one.
inline CoefficientPair initial_point(const ProblemInstance& inst) {
  CoefficientPair x{Vector::Zero(inst.n() + 1), Vector::Zero(inst.m() + 1)};
  x.b[0] = 1.0;
  return x;
}

/// Solution set modelled as the feasible ray { lambda (a*, b*) : lambda >= lambda_min }.
struct KnownSolution {
  Vector a_star;
  Vector b_star;
  double lambda_min = 1.0;

  Vector direction() const {
    Vector v(a_star.size() + b_star.size());
    v << a_star, b_star;
    return v;
  }

  /// lambda_min = 1 / min_i <b*, h(t_i)>; throws if that minimum is not positive.
  static KnownSolution on(const ProblemInstance& inst, Vector a_star, Vector b_star) {
    if (a_star.size() != inst.n() + 1 || b_star.size() != inst.m() + 1) {
      throw std::invalid_argument("known solution has wrong coefficient counts");
    }
    const Vector d = inst.H() * b_star;
    const double dmin = d.minCoeff();
    if (!(dmin > 0.0)) throw std::invalid_argument("known solution denominator is not positive on the grid");
    return {std::move(a_star), std::move(b_star), 1.0 / dmin};
  }
};

/// Euclidean distance from x to the ray: project onto the line through the
/// origin, clamp the multiplier at lambda_min.
inline double distance_to_solution(const Vector& x, const KnownSolution& sol) {
  const Vector v = sol.direction();
  if (x.size() != v.size()) throw std::invalid_argument("point and solution differ in dimension");
  const double vv = v.squaredNorm();
  if (!(vv > 0.0)) throw std::invalid_argument("known solution must be nonzero");
  const double lambda = std::max(x.dot(v) / vv, sol.lambda_min);
  return (x - lambda * v).norm();
}

inline double distance_to_solution(const CoefficientPair& x, const KnownSolution& sol) {
  return distance_to_solution(x.point(), sol);
}

inline RunReport solve_approximation(const ProblemInstance& inst, const SolveConfig& config,
                                     const std::optional<KnownSolution>& sol = std::nullopt,
                                     ActiveTolerance tol = {}) {
  const auto T = build_operator(inst, tol);
  const auto merit = [&inst](const Vector& x) { return psi(inst, x); };
  std::function<double(const Vector&)> dist;
  if (sol) dist = [s = *sol](const Vector& x) { return distance_to_solution(x, s); };
  return solve(T, merit, feasible_set(inst), initial_point(inst).point(), config, dist);
}

}  // namespace ratapprox

#endif  // RATAPPROX_APPROX_SOLVER_HPP
