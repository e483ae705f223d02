#ifndef RATAPPROX_GEOMETRY_HPP
#define RATAPPROX_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ratapprox/error.hpp"
#include "ratapprox/problem.hpp"

namespace ratapprox {

/// { y : <normal, y> <= offset }
struct Halfspace {
  Vector normal;
  double offset = 0.0;

  bool contains(const Vector& y, double slack = 0.0) const { return normal.dot(y) <= offset + slack; }
};

inline Vector project_halfspace(const Halfspace& hs, const Vector& y) {
  const double nn = hs.normal.squaredNorm();
  if (!(nn > 0.0)) throw std::invalid_argument("halfspace normal must be nonzero");
  const double excess = hs.normal.dot(y) - hs.offset;
  if (excess <= 0.0) return y;
  return y - (excess / nn) * hs.normal;
}

/// H(x_bar, u) = { y : <u, y - x_bar> <= 0 }.
inline Halfspace halfspace_from(const Vector& x_bar, const Vector& u) {
  if (u.size() != x_bar.size()) throw std::invalid_argument("halfspace normal and anchor differ in size");
  if (!(u.squaredNorm() > 0.0)) throw std::invalid_argument("halfspace normal must be nonzero");
  return {u, u.dot(x_bar)};
}

/// Intersection of halfspaces, stored row-wise for fast sweeps.
class Polyhedron {
 public:
  Polyhedron() = default;

  explicit Polyhedron(const std::vector<Halfspace>& list) {
    if (list.empty()) throw std::invalid_argument("polyhedron needs at least one halfspace");
    const Eigen::Index dim = list.front().normal.size();
    normals_.resize(static_cast<Eigen::Index>(list.size()), dim);
    offsets_.resize(static_cast<Eigen::Index>(list.size()));
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].normal.size() != dim) throw std::invalid_argument("halfspaces differ in dimension");
      normals_.row(static_cast<Eigen::Index>(i)) = list[i].normal.transpose();
      offsets_[static_cast<Eigen::Index>(i)] = list[i].offset;
    }
    finish();
  }

  Polyhedron(RowMatrix normals, Vector offsets) : normals_(std::move(normals)), offsets_(std::move(offsets)) {
    if (normals_.rows() == 0) throw std::invalid_argument("polyhedron needs at least one halfspace");
    if (offsets_.size() != normals_.rows()) throw std::invalid_argument("offset count mismatch");
    finish();
  }

  std::size_t size() const { return static_cast<std::size_t>(normals_.rows()); }
  Eigen::Index dim() const { return normals_.cols(); }
  const RowMatrix& normals() const { return normals_; }
  const Vector& offsets() const { return offsets_; }
  const Vector& squared_norms() const { return sq_norms_; }
  /// Transposed normals scaled to unit length, one column per halfspace.
  const Matrix& unit_normals_t() const { return unit_t_; }

  Halfspace halfspace(std::size_t i) const {
    const auto r = static_cast<Eigen::Index>(i);
    return {normals_.row(r).transpose(), offsets_[r]};
  }

  /// Copy with one more halfspace at the end.
  Polyhedron with(const Halfspace& extra) const {
    if (extra.normal.size() != dim()) throw std::invalid_argument("appended halfspace has wrong dimension");
    RowMatrix normals(normals_.rows() + 1, normals_.cols());
    normals.topRows(normals_.rows()) = normals_;
    normals.row(normals_.rows()) = extra.normal.transpose();
    Vector offsets(offsets_.size() + 1);
    offsets << offsets_, extra.offset;
    return Polyhedron(std::move(normals), std::move(offsets));
  }

  /// Largest Euclidean distance from y to a violated halfspace (0 if inside).
  double violation(const Vector& y) const {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < normals_.rows(); ++i) {
      const double excess = normals_.row(i).dot(y) - offsets_[i];
      if (excess > 0.0) worst = std::max(worst, excess / std::sqrt(sq_norms_[i]));
    }
    return worst;
  }

 private:
  void finish() {
    sq_norms_ = normals_.rowwise().squaredNorm();
    for (Eigen::Index i = 0; i < sq_norms_.size(); ++i) {
      if (!(sq_norms_[i] > 0.0)) throw std::invalid_argument("halfspace normal must be nonzero");
    }
    unit_t_ = normals_.transpose() * sq_norms_.cwiseSqrt().cwiseInverse().asDiagonal();
  }

  RowMatrix normals_;
  Vector offsets_;
  Vector sq_norms_;
  Matrix unit_t_;
};

/// The feasible set: one halfspace -<b, h(t_i)> <= -1 per grid point, in grid
/// order, with zero numerator block.
inline Polyhedron feasible_set(const ProblemInstance& inst) {
  RowMatrix normals = RowMatrix::Zero(static_cast<Eigen::Index>(inst.size()), inst.dim());
  normals.rightCols(inst.m() + 1) = -inst.H();
  Vector offsets = Vector::Constant(static_cast<Eigen::Index>(inst.size()), -1.0);
  return Polyhedron(std::move(normals), std::move(offsets));
}

enum class ProjectionMethod {
  ActiveSet,  // least-distance program solved by nonnegative least squares
  Dykstra,    // Dykstra's alternating projections
};

struct ProjectionOptions {
  double tol = 1e-10;
  int max_sweeps = 100000;
  ProjectionMethod method = ProjectionMethod::ActiveSet;
};

enum class DykstraStatus {
  Converged,  // violation and sweep movement both within tolerance
  Empty,      // multipliers certify that the polyhedron is empty
  Exhausted,  // sweep budget ran out
};

struct DykstraResult {
  Vector point;
  double violation = 0.0;
  double movement = 0.0;
  int sweeps = 0;
  DykstraStatus status = DykstraStatus::Exhausted;
  /// Correction multipliers: the correction for halfspace i is multipliers[i] * normal_i.
  Vector multipliers;
};

struct NnlsResult {
  Vector solution;
  Vector residual;  // E * solution - f
  int iterations = 0;
  bool converged = false;
};

/// Lawson-Hanson active-set method for min || E u - f || subject to u >= 0.
/// `tol` bounds the largest positive entry of the dual vector at exit.
inline NnlsResult nnls(const Matrix& E, const Vector& f, double tol, int max_iter) {
  const Eigen::Index k = E.cols();
  NnlsResult out;
  out.solution = Vector::Zero(k);
  Vector& u = out.solution;
  std::vector<char> passive(static_cast<std::size_t>(k), 0);
  std::vector<char> banned(static_cast<std::size_t>(k), 0);
  std::vector<Eigen::Index> idx;

  auto solve_passive = [&]() {
    Matrix Ep(E.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) Ep.col(static_cast<Eigen::Index>(j)) = E.col(idx[j]);
    const Vector sp = Ep.colPivHouseholderQr().solve(f);
    Vector s = Vector::Zero(k);
    for (std::size_t j = 0; j < idx.size(); ++j) s[idx[j]] = sp[static_cast<Eigen::Index>(j)];
    return s;
  };

  Vector w = E.transpose() * f;
  while (out.iterations < max_iter) {
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      if (!passive[jj] && !banned[jj] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    }
    if (best < 0) {
      out.converged = true;
      break;
    }
    passive[static_cast<std::size_t>(best)] = 1;
    idx.push_back(best);
    Vector s = solve_passive();
    ++out.iterations;
    if (s[best] <= 0.0) {
      // Rounding made the entering column useless; skip it until u changes.
      passive[static_cast<std::size_t>(best)] = 0;
      idx.pop_back();
      banned[static_cast<std::size_t>(best)] = 1;
      continue;
    }
    while (out.iterations < max_iter) {
      double step = 1.0;
      Eigen::Index blocking = -1;
      for (Eigen::Index j : idx) {
        if (s[j] <= 0.0) {
          const double ratio = u[j] / (u[j] - s[j]);
          if (ratio < step) {
            step = ratio;
            blocking = j;
          }
        }
      }
      if (blocking < 0) break;
      u += step * (s - u);
      std::vector<Eigen::Index> keep;
      for (Eigen::Index j : idx) {
        if (j != blocking && u[j] > 0.0) {
          keep.push_back(j);
        } else {
          passive[static_cast<std::size_t>(j)] = 0;
          u[j] = 0.0;
        }
      }
      idx = std::move(keep);
      s = solve_passive();
      ++out.iterations;
    }
    u = s;
    std::fill(banned.begin(), banned.end(), 0);
    w = E.transpose() * (f - E * u);
  }
  out.residual = E * u - f;
  return out;
}

namespace detail {

/// On an empty polyhedron the Dykstra multipliers grow without bound while
/// N^T lam = y - x stays bounded. For l >= 0 with s = <l, c> < 0 and
/// r = N^T l, every feasible x has <r, x> <= s, so |x| >= -s / |r|; beyond
/// 1e8 the polyhedron is treated as empty. The raw direction lam / |lam|_1
/// closes in on a certificate far too slowly, so the system N^T l = 0,
/// <l, c> = -1 is also solved by NNLS over the multiplier support and the
/// result checked the same way.
inline bool farkas_bound_exceeded(const RowMatrix& N, const Vector& c, const Vector& l) {
  const double s = l.dot(c);
  if (!(s < 0.0)) return false;
  return -s > 1e8 * (N.transpose() * l).norm();
}

inline bool farkas_empty(const RowMatrix& N, const Vector& c, const Vector& lam) {
  const double total = lam.sum();
  if (!(total > 0.0)) return false;
  if (farkas_bound_exceeded(N, c, lam / total)) return true;

  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] > 0.0) support.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(support.size());
  Matrix E(N.cols() + 1, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    E.col(j).head(N.cols()) = N.row(support[j]).transpose();
    E(N.cols(), j) = c[support[j]];
  }
  Vector f = Vector::Zero(N.cols() + 1);
  f[N.cols()] = -1.0;
  const NnlsResult r = nnls(E, f, 1e-12, 10 * static_cast<int>(k) + 10);
  Vector l = Vector::Zero(lam.size());
  for (Eigen::Index j = 0; j < k; ++j) l[support[j]] = std::max(0.0, r.solution[j]);
  return farkas_bound_exceeded(N, c, l);
}
}  // namespace detail

/// Dykstra's alternating projection over the halfspaces, in list order.
/// For halfspaces the correction vectors are nonnegative multiples of the
/// normals, so only their scalar multipliers are stored.
inline DykstraResult dykstra(const Polyhedron& poly, const Vector& y, const ProjectionOptions& opt = {}) {
  if (poly.size() == 0) throw std::invalid_argument("empty polyhedron");
  if (y.size() != poly.dim()) throw std::invalid_argument("point dimension does not match polyhedron");
  const RowMatrix& N = poly.normals();
  const Vector& c = poly.offsets();
  const Vector& nn = poly.squared_norms();
  const Eigen::Index rows = N.rows();

  DykstraResult res;
  res.point = y;
  res.multipliers = Vector::Zero(rows);
  Vector& x = res.point;
  Vector& lam = res.multipliers;
  Vector prev(y.size());
  Vector prev_lam(rows);

  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    prev = x;
    prev_lam = lam;
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double li = lam[i];
      const double excess = N.row(i).dot(x) - c[i] + li * nn[i];
      if (excess > 0.0) {
        const double next = excess / nn[i];
        x.noalias() += (li - next) * N.row(i).transpose();
        lam[i] = next;
      } else if (li != 0.0) {
        x.noalias() += li * N.row(i).transpose();
        lam[i] = 0.0;
      }
    }
    res.sweeps = sweep;
    res.movement = (x - prev).norm();
    res.violation = poly.violation(x);
    // x can stand still for a sweep while the corrections are still moving,
    // so both have to settle
    const double lam_move = (lam - prev_lam).cwiseProduct(nn.cwiseSqrt()).norm();
    if (res.violation <= opt.tol && res.movement <= opt.tol && lam_move <= opt.tol) {
      res.status = DykstraStatus::Converged;
      return res;
    }
    if (res.movement <= opt.tol && res.violation > opt.tol && detail::farkas_empty(N, c, lam)) {
      res.status = DykstraStatus::Empty;
      return res;
    }
  }
  res.status = DykstraStatus::Exhausted;
  return res;
}

struct LeastDistanceResult {
  Vector point;
  bool feasible = false;   // false: the polyhedron was found to be empty
  bool converged = false;  // the NNLS subproblem met its tolerance
  double violation = 0.0;
};

/// Exact projection by least-distance programming: with y + w the projection,
/// w minimises ||w|| subject to -A w >= A y - c, and is recovered from the
/// nonnegative least-squares problem
///   min || [-A^T; (A y - c)^T] u - e_last ||,  u >= 0.
/// A zero residual certifies that the polyhedron is empty. Since
/// ||w|| = ||r_head|| / ||r||^2, a residual below 1e-8 would mean a
/// projection distance beyond ~1e8, so it is read as empty: the NNLS residual
/// on an empty set only gets down to rounding level, not to exact zero.
inline LeastDistanceResult project_least_distance(const Polyhedron& poly, const Vector& y) {
  const RowMatrix& A = poly.normals();
  const Eigen::Index dim = A.cols();
  const Vector excess = A * y - poly.offsets();
  LeastDistanceResult out;
  if (excess.maxCoeff() <= 0.0) {
    out.point = y;
    out.feasible = true;
    out.converged = true;
    return out;
  }
  // Rows are scaled to unit normals so the tolerance is geometric.
  const Vector scale = poly.squared_norms().cwiseSqrt().cwiseInverse();
  Matrix E(dim + 1, A.rows());
  E.topRows(dim) = -poly.unit_normals_t();
  E.row(dim) = (excess.cwiseProduct(scale)).transpose();
  Vector f = Vector::Zero(dim + 1);
  f[dim] = 1.0;
  const double tol = 1e-13 * std::max(1.0, E.cwiseAbs().maxCoeff());
  const NnlsResult sol = nnls(E, f, tol, 30 * static_cast<int>(dim + 1) + static_cast<int>(A.rows()));
  out.converged = sol.converged;
  const double last = sol.residual[dim];
  if (sol.residual.norm() <= 1e-8 || !(-last > 0.0)) {
    out.point = y;
    out.feasible = false;
    out.violation = poly.violation(y);
    return out;
  }
  out.point = y + sol.residual.head(dim) / (-last);
  out.feasible = true;
  out.violation = poly.violation(out.point);
  return out;
}

/// Euclidean projection onto the polyhedron. A single halfspace is projected
/// analytically; otherwise the configured method runs. Throws
/// ConvergenceError when the result does not meet opt.tol (relative to
/// max(1, ||y||) for the active-set method).
inline Vector project_polyhedron(const Polyhedron& poly, const Vector& y, const ProjectionOptions& opt = {}) {
  if (poly.size() == 1) return project_halfspace(poly.halfspace(0), y);
  if (opt.method == ProjectionMethod::ActiveSet) {
    LeastDistanceResult res = project_least_distance(poly, y);
    if (!res.feasible || !res.converged || res.violation > opt.tol * std::max(1.0, y.norm())) {
      throw ConvergenceError(res.feasible ? "least-distance projection missed tolerance (violation " +
                                                std::to_string(res.violation) + ")"
                                          : "polyhedron is empty",
                             std::move(res.point), res.violation);
    }
    return std::move(res.point);
  }
  DykstraResult res = dykstra(poly, y, opt);
  if (res.status != DykstraStatus::Converged) {
    throw ConvergenceError("polyhedron projection did not converge in " + std::to_string(res.sweeps) +
                               " sweeps (violation " + std::to_string(res.violation) + ")",
                           std::move(res.point), res.violation);
  }
  return std::move(res.point);
}

/// Dykstra projection with explicit tolerance and sweep budget.
inline Vector project_polyhedron(const Polyhedron& poly, const Vector& y, double tol, int max_sweeps) {
  return project_polyhedron(poly, y, ProjectionOptions{tol, max_sweeps, ProjectionMethod::Dykstra});
}

}  // namespace ratapprox

#endif  // RATAPPROX_GEOMETRY_HPP
