#ifndef RATAPPROX_ORACLE_HPP
#define RATAPPROX_ORACLE_HPP

// Independent checks on the solver: finite-difference gradients, the
// minimum-norm element of a generator hull, and the grid minimax value by
// bisection over the polyhedral level sets of Psi.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ratapprox/approx_solver.hpp"
#include "ratapprox/error.hpp"
#include "ratapprox/geometry.hpp"
#include "ratapprox/hull.hpp"
#include "ratapprox/problem.hpp"

namespace ratapprox {

/// Central differences of sigma_i, one coordinate at a time.
/// Throws StepSizeError if a perturbed point has a nonpositive denominator at t_i.
inline Vector fd_gradient(const ProblemInstance& inst, const Vector& x, std::size_t i, double h) {
  inst.check_dim(x);
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (i >= inst.size()) throw std::out_of_range("grid index out of range");
  const double fi = inst.f(i);
  auto sigma = [&](const Vector& y) {
    const double d = inst.denominator(y, i);
    if (!(d > 0.0)) {
      throw StepSizeError("finite-difference step " + std::to_string(h) +
                          " leaves the denominator nonpositive at grid index " + std::to_string(i));
    }
    return fi - inst.numerator(y, i) / d;
  };
  Vector grad(x.size());
  Vector y = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    y[j] = x[j] + h;
    const double up = sigma(y);
    y[j] = x[j] - h;
    const double down = sigma(y);
    y[j] = x[j];
    grad[j] = (up - down) / (2.0 * h);
  }
  return grad;
}

inline Vector fd_gradient(const ProblemInstance& inst, const CoefficientPair& x, std::size_t i, double h) {
  return fd_gradient(inst, x.point(), i, h);
}

struct HullPoint {
  Vector point;
  double norm = 0.0;
  Vector weights;
};

/// Minimum-norm element of conv(gens). Throws ConvergenceError when the
/// iteration budget runs out.
inline HullPoint min_norm_in_hull(const GeneratorSet& gens, double tol, int max_iter = 1000) {
  if (gens.empty()) throw std::invalid_argument("min-norm point of an empty generator set");
  MinNormResult r = min_norm_point(gens.vectors, tol, 1e-12, max_iter);
  return {std::move(r.point), r.norm, std::move(r.weights)};
}

/// The level set {Psi <= z} intersected with C, written as halfspaces. Per
/// grid point, in grid order:
///   <(-g_i, (f_i - z) h_i), x> <= 0      (f d - p <= z d)
///   <( g_i, -(f_i + z) h_i), x> <= 0     (p - f d <= z d)
///   <(0, -h_i), x> <= -1                 (d >= 1)
inline Polyhedron level_set(const ProblemInstance& inst, double z) {
  if (!(z >= 0.0)) throw std::invalid_argument("level must be nonnegative");
  const auto M = static_cast<Eigen::Index>(inst.size());
  const Eigen::Index na = inst.n() + 1;
  const Eigen::Index nb = inst.m() + 1;
  RowMatrix normals = RowMatrix::Zero(3 * M, na + nb);
  Vector offsets = Vector::Zero(3 * M);
  for (Eigen::Index i = 0; i < M; ++i) {
    const double fi = inst.f(static_cast<std::size_t>(i));
    normals.block(3 * i, 0, 1, na) = -inst.G().row(i);
    normals.block(3 * i, na, 1, nb) = (fi - z) * inst.H().row(i);
    normals.block(3 * i + 1, 0, 1, na) = inst.G().row(i);
    normals.block(3 * i + 1, na, 1, nb) = -(fi + z) * inst.H().row(i);
    normals.block(3 * i + 2, na, 1, nb) = -inst.H().row(i);
    offsets[3 * i + 2] = -1.0;
  }
  return Polyhedron(std::move(normals), std::move(offsets));
}

enum class Feasibility { Feasible, Infeasible, Indeterminate };

inline std::string_view feasibility_name(Feasibility f) {
  switch (f) {
    case Feasibility::Feasible: return "feasible";
    case Feasibility::Infeasible: return "infeasible";
    case Feasibility::Indeterminate: return "indeterminate";
  }
  return "?";
}

struct LevelSetResult {
  Feasibility status = Feasibility::Indeterminate;
  std::optional<CoefficientPair> witness;
  double violation = 0.0;
};

/// Feasibility of the level set at z, by projecting the standard initial
/// point onto it. The active-set projector certifies emptiness; with
/// Dykstra an emptiness certificate from the multipliers counts and an
/// exhausted budget as indeterminate. A feasible answer needs the projected
/// point to violate no halfspace by more than tol.
inline LevelSetResult level_set_feasible(const ProblemInstance& inst, double z, double tol,
                                         ProjectionMethod method = ProjectionMethod::ActiveSet,
                                         int max_sweeps = 20000) {
  const Polyhedron poly = level_set(inst, z);
  const Vector x0 = initial_point(inst).point();
  LevelSetResult out;
  Vector point;
  if (method == ProjectionMethod::ActiveSet) {
    const LeastDistanceResult r = project_least_distance(poly, x0);
    if (!r.feasible) {
      out.status = Feasibility::Infeasible;
      out.violation = r.violation;
      return out;
    }
    if (!r.converged) {
      out.status = Feasibility::Indeterminate;
      out.violation = r.violation;
      return out;
    }
    point = r.point;
  } else {
    ProjectionOptions opt;
    opt.tol = tol;
    opt.max_sweeps = max_sweeps;
    opt.method = ProjectionMethod::Dykstra;
    const DykstraResult r = dykstra(poly, x0, opt);
    if (r.status == DykstraStatus::Empty) {
      out.status = Feasibility::Infeasible;
      out.violation = r.violation;
      return out;
    }
    if (r.status == DykstraStatus::Exhausted) {
      out.status = Feasibility::Indeterminate;
      out.violation = r.violation;
      return out;
    }
    point = r.point;
  }
  out.violation = poly.violation(point);
  if (out.violation <= tol * std::max(1.0, point.norm())) {
    out.status = Feasibility::Feasible;
    out.witness = CoefficientPair::from_point(point, inst.n());
  } else {
    out.status = Feasibility::Indeterminate;
  }
  return out;
}

struct MinimaxResult {
  double value = 0.0;  // midpoint of the final bracket
  double lo = 0.0;
  double hi = 0.0;
  std::optional<CoefficientPair> witness;  // feasible point at level hi
  int probes = 0;
};

struct BisectionOptions {
  double tol_z = 1e-6;
  double feasibility_tol = 1e-9;
  ProjectionMethod method = ProjectionMethod::ActiveSet;
};

/// Grid minimax value by bisection on z over [0, z_hi]. z = 0 is probed
/// first, so exactly representable targets return 0. An indeterminate
/// probe is retried once with a tenfold looser feasibility tolerance, then
/// raises IndeterminateError.
inline MinimaxResult bisection_minimax(const ProblemInstance& inst, double z_hi, const BisectionOptions& opt = {}) {
  if (!(z_hi >= 0.0) || !std::isfinite(z_hi)) throw std::invalid_argument("z_hi must be finite and nonnegative");
  if (!(opt.tol_z > 0.0)) throw std::invalid_argument("tol_z must be positive");
  MinimaxResult out;
  auto probe = [&](double z) {
    ++out.probes;
    LevelSetResult r = level_set_feasible(inst, z, opt.feasibility_tol, opt.method);
    if (r.status == Feasibility::Indeterminate) {
      ++out.probes;
      r = level_set_feasible(inst, z, 10.0 * opt.feasibility_tol, opt.method);
      if (r.status == Feasibility::Indeterminate) {
        throw IndeterminateError("level-set feasibility indeterminate at z = " + std::to_string(z), z);
      }
    }
    return r;
  };

  LevelSetResult at_zero = probe(0.0);
  if (at_zero.status == Feasibility::Feasible) {
    out.witness = std::move(at_zero.witness);
    return out;
  }
  double lo = 0.0;
  double hi = z_hi;
  LevelSetResult top = probe(hi);
  if (top.status != Feasibility::Feasible) {
    throw std::invalid_argument("level set at z_hi = " + std::to_string(z_hi) + " is empty; z_hi is below the minimax");
  }
  out.witness = std::move(top.witness);
  while (hi - lo > opt.tol_z) {
    const double mid = 0.5 * (lo + hi);
    LevelSetResult r = probe(mid);
    if (r.status == Feasibility::Feasible) {
      hi = mid;
      out.witness = std::move(r.witness);
    } else {
      lo = mid;
    }
  }
  out.lo = lo;
  out.hi = hi;
  out.value = 0.5 * (lo + hi);
  return out;
}

inline MinimaxResult bisection_minimax(const ProblemInstance& inst, const BisectionOptions& opt = {}) {
  return bisection_minimax(inst, psi(inst, initial_point(inst).point()), opt);
}

struct StationarityCertificate {
  double min_norm = 0.0;
  double scale = 0.0;  // largest generator norm
  double ratio = 0.0;  // min_norm / scale
  bool certified = false;
};

/// Relative size of the minimum-norm element of the subdifferential at x:
/// ratio <= threshold is read as 0 in the hull, i.e. x globally optimal on
/// the grid.
inline StationarityCertificate stationarity_certificate(const ProblemInstance& inst, const Vector& x,
                                                        double tol_active, double threshold) {
  const GeneratorSet gens = subdiff_generators(inst, x, tol_active);
  StationarityCertificate out;
  for (const Vector& v : gens.vectors) out.scale = std::max(out.scale, v.norm());
  out.min_norm = min_norm_in_hull(gens, 0.0).norm;
  out.ratio = out.scale > 0.0 ? out.min_norm / out.scale : 0.0;
  out.certified = out.ratio <= threshold;
  return out;
}

}  // namespace ratapprox

#endif  // RATAPPROX_ORACLE_HPP
