#ifndef RATAPPROX_PROBLEM_HPP
#define RATAPPROX_PROBLEM_HPP

// The discretised best-approximation problem
//
//   minimise  Psi(a, b) = max_i | f(t_i) - <a, g(t_i)> / <b, h(t_i)> |
//   over      C = { (a, b) : <b, h(t_i)> >= 1 for every grid point }
//
// together with the pieces of its Clarke subdifferential: per-point
// deviations sigma_i, the active sets, gradients of sigma_i, and the finite
// generator set whose convex hull is the subdifferential.
//
// A point x is laid out as (a_0..a_n, b_0..b_m).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ratapprox/basis.hpp"
#include "ratapprox/error.hpp"

namespace ratapprox {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Grid {
  std::vector<double> points;

  double lo() const { return points.front(); }
  double hi() const { return points.back(); }
  std::size_t size() const { return points.size(); }
  double operator[](std::size_t i) const { return points[i]; }

  /// Wraps explicit points; they must be strictly increasing, at least two.
  static Grid from_points(std::vector<double> pts) {
    if (pts.size() < 2) throw std::invalid_argument("grid needs at least 2 points");
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (!(pts[i] > pts[i - 1])) throw std::invalid_argument("grid points must be strictly increasing");
    }
    return Grid{std::move(pts)};
  }
};

inline Grid make_uniform_grid(double lo, double hi, int count) {
  if (count < 2) throw std::invalid_argument("uniform grid needs at least 2 points");
  if (!(lo < hi)) throw std::invalid_argument("uniform grid needs lo < hi");
  std::vector<double> pts(static_cast<std::size_t>(count));
  const double step = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) pts[static_cast<std::size_t>(i)] = lo + i * step;
  pts.back() = hi;
  return Grid{std::move(pts)};
}

// ---------------------------------------------------------------------------
// Target functions

struct NamedTarget {
  std::string_view name;
  double (*fn)(double);
};

inline const std::vector<NamedTarget>& target_registry() {
  static const std::vector<NamedTarget> registry = {
      {"abs", [](double t) { return std::abs(t); }},
      {"sin", [](double t) { return std::sin(t); }},
      {"abssin", [](double t) { return std::abs(std::sin(t)); }},
      {"sqrtabs", [](double t) { return std::sqrt(std::abs(t)); }},
      {"one", [](double) { return 1.0; }},
      {"runge", [](double t) { return 1.0 / (t * t + 1.0); }},
      {"ratl1", [](double t) { return t / (t + 1.5); }},
      {"ratl2", [](double t) { return (t * t - 1.0) / (t + 2.0); }},
      {"sincos", [](double t) { return (std::sin(t) - std::cos(t)) / (t + 2.0); }},
  };
  return registry;
}

inline std::optional<double (*)(double)> find_target(std::string_view name) {
  for (const auto& entry : target_registry()) {
    if (entry.name == name) return entry.fn;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Coefficients

struct CoefficientPair {
  Vector a;
  Vector b;

  Vector point() const {
    Vector x(a.size() + b.size());
    x << a, b;
    return x;
  }

  static CoefficientPair from_point(const Vector& x, int n) {
    if (n + 1 > x.size()) throw std::invalid_argument("point too short for numerator degree");
    return {x.head(n + 1), x.tail(x.size() - n - 1)};
  }
};

// ---------------------------------------------------------------------------
// Problem instance

class ProblemInstance {
 public:
  ProblemInstance(Grid grid, std::vector<double> f_values, BasisSpec num, int n, BasisSpec den, int m)
      : grid_(std::move(grid)), f_(std::move(f_values)), num_(std::move(num)), den_(std::move(den)), n_(n), m_(m) {
    if (grid_.size() < 2) throw std::invalid_argument("grid needs at least 2 points");
    if (f_.size() != grid_.size()) throw std::invalid_argument("f samples do not match the grid");
    if (n_ < 0 || m_ < 0) throw std::invalid_argument("degrees must be nonnegative");
    for (double v : f_) {
      if (!std::isfinite(v)) throw DomainError("target is not finite on the grid");
    }
    G_ = eval_basis_grid(num_, n_, grid_.points);
    H_ = eval_basis_grid(den_, m_, grid_.points);
    if (!H_.allFinite() || !G_.allFinite()) throw DomainError("basis is not finite on the grid");
  }

  /// Samples `f` on the grid.
  static ProblemInstance sample(Grid grid, const std::function<double(double)>& f, BasisSpec num, int n,
                                BasisSpec den, int m) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);
    return ProblemInstance(std::move(grid), std::move(values), std::move(num), n, std::move(den), m);
  }

  const Grid& grid() const { return grid_; }
  std::span<const double> f_values() const { return f_; }
  double f(std::size_t i) const { return f_[i]; }
  const RowMatrix& G() const { return G_; }
  const RowMatrix& H() const { return H_; }
  const BasisSpec& numerator_basis() const { return num_; }
  const BasisSpec& denominator_basis() const { return den_; }
  int n() const { return n_; }
  int m() const { return m_; }
  std::size_t size() const { return grid_.size(); }
  Eigen::Index dim() const { return n_ + m_ + 2; }

  auto a_of(const Vector& x) const { return x.head(n_ + 1); }
  auto b_of(const Vector& x) const { return x.tail(m_ + 1); }

  double numerator(const Vector& x, std::size_t i) const {
    return G_.row(static_cast<Eigen::Index>(i)).dot(a_of(x));
  }
  double denominator(const Vector& x, std::size_t i) const {
    return H_.row(static_cast<Eigen::Index>(i)).dot(b_of(x));
  }

  /// Rational function value at an arbitrary abscissa (uses the basis
  /// specs, so tabulated bases only work at grid points).
  double ratio_at(const Vector& x, double t) const {
    return eval_basis(num_, n_, t).dot(a_of(x)) / eval_basis(den_, m_, t).dot(b_of(x));
  }

  void check_dim(const Vector& x) const {
    if (x.size() != dim()) {
      throw std::invalid_argument("point has dimension " + std::to_string(x.size()) + ", expected " +
                                  std::to_string(dim()));
    }
  }

 private:
  Grid grid_;
  std::vector<double> f_;
  BasisSpec num_;
  BasisSpec den_;
  int n_;
  int m_;
  RowMatrix G_;
  RowMatrix H_;
};

// ---------------------------------------------------------------------------
// Deviations and the objective

namespace detail {

inline double checked_denominator(const ProblemInstance& inst, const Vector& x, std::size_t i) {
  const double d = inst.denominator(x, i);
  if (!(d > 0.0)) {
    throw InfeasiblePointError("nonpositive denominator at grid index " + std::to_string(i), i, d);
  }
  return d;
}

}  // namespace detail

inline double deviation(const ProblemInstance& inst, const Vector& x, std::size_t i) {
  inst.check_dim(x);
  const double d = detail::checked_denominator(inst, x, i);
  return inst.f(i) - inst.numerator(x, i) / d;
}

inline double deviation(const ProblemInstance& inst, const CoefficientPair& x, std::size_t i) {
  return deviation(inst, x.point(), i);
}

/// sigma_i for every grid point.
inline Vector deviations(const ProblemInstance& inst, const Vector& x) {
  inst.check_dim(x);
  Vector s(static_cast<Eigen::Index>(inst.size()));
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const double d = detail::checked_denominator(inst, x, i);
    s[static_cast<Eigen::Index>(i)] = inst.f(i) - inst.numerator(x, i) / d;
  }
  return s;
}

struct MaxDeviation {
  double psi;
  std::size_t argmax;
};

inline MaxDeviation max_deviation(const ProblemInstance& inst, const Vector& x) {
  const Vector s = deviations(inst, x);
  MaxDeviation out{-1.0, 0};
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double v = std::abs(s[i]);
    if (v > out.psi) out = {v, static_cast<std::size_t>(i)};
  }
  return out;
}

inline MaxDeviation max_deviation(const ProblemInstance& inst, const CoefficientPair& x) {
  return max_deviation(inst, x.point());
}

/// Psi(x), the maximal absolute deviation on the grid.
inline double psi(const ProblemInstance& inst, const Vector& x) { return max_deviation(inst, x).psi; }

/// Default active-point tolerance: relative to Psi, absolute below one.
inline double default_tol_active(double psi_value) { return 1e-8 * std::max(1.0, psi_value); }

struct ActiveSets {
  std::vector<std::size_t> plus;
  std::vector<std::size_t> minus;
  double psi = 0.0;
  double tol_active = 0.0;
};

inline ActiveSets active_sets_from(const Vector& sigma, double tol_active) {
  ActiveSets out;
  out.tol_active = tol_active;
  out.psi = sigma.size() ? sigma.cwiseAbs().maxCoeff() : 0.0;
  const double level = out.psi - tol_active;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] >= level) out.plus.push_back(static_cast<std::size_t>(i));
    if (-sigma[i] >= level) out.minus.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

inline ActiveSets active_sets(const ProblemInstance& inst, const Vector& x, double tol_active) {
  return active_sets_from(deviations(inst, x), tol_active);
}

inline ActiveSets active_sets(const ProblemInstance& inst, const CoefficientPair& x, double tol_active) {
  return active_sets(inst, x.point(), tol_active);
}

/// Gradient of sigma_i with respect to (a, b):
///   (1/d^2) * ( -d * g(t_i),  <a, g(t_i)> * h(t_i) ),   d = <b, h(t_i)>.
inline Vector sigma_gradient(const ProblemInstance& inst, const Vector& x, std::size_t i) {
  inst.check_dim(x);
  const double d = detail::checked_denominator(inst, x, i);
  const double p = inst.numerator(x, i);
  const auto row = static_cast<Eigen::Index>(i);
  Vector grad(inst.dim());
  grad.head(inst.n() + 1) = -inst.G().row(row).transpose() / d;
  grad.tail(inst.m() + 1) = inst.H().row(row).transpose() * (p / (d * d));
  return grad;
}

inline Vector sigma_gradient(const ProblemInstance& inst, const CoefficientPair& x, std::size_t i) {
  return sigma_gradient(inst, x.point(), i);
}

struct GeneratorSet {
  std::vector<Vector> vectors;
  /// (grid index, sign) for each vector; the vector is sign * grad sigma_index.
  std::vector<std::pair<std::size_t, int>> provenance;
  /// Optional activity slack per vector, Psi - sign * sigma_index >= 0;
  /// empty means every vector is exactly active.
  std::vector<double> slack;

  std::size_t size() const { return vectors.size(); }
  bool empty() const { return vectors.empty(); }
};

namespace detail {

/// Drops exact duplicates, keeping first occurrences in order. Candidates
/// are grouped by a hash of their entries and compared in full only within
/// a group.
inline void dedup_exact(GeneratorSet& gs) {
  const std::size_t k = gs.vectors.size();
  if (k < 2) return;
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::uint64_t h = 1469598103934665603ull;
    const Vector& v = gs.vectors[j];
    for (Eigen::Index c = 0; c < v.size(); ++c) {
      const double e = v[c] == 0.0 ? 0.0 : v[c];  // -0 and +0 compare equal
      std::uint64_t bits;
      std::memcpy(&bits, &e, sizeof bits);
      h = (h ^ bits) * 1099511628211ull;
    }
    keyed[j] = {h, j};
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<char> keep(k, 1);
  bool any = false;
  for (std::size_t lo = 0; lo < k;) {
    std::size_t hi = lo + 1;
    while (hi < k && keyed[hi].first == keyed[lo].first) ++hi;
    for (std::size_t p = lo + 1; p < hi; ++p) {
      for (std::size_t q = lo; q < p; ++q) {
        if (keep[keyed[q].second] && gs.vectors[keyed[p].second] == gs.vectors[keyed[q].second]) {
          keep[keyed[p].second] = 0;
          any = true;
          break;
        }
      }
    }
    lo = hi;
  }
  if (!any) return;
  GeneratorSet out;
  for (std::size_t j = 0; j < k; ++j) {
    if (!keep[j]) continue;
    out.vectors.push_back(std::move(gs.vectors[j]));
    out.provenance.push_back(gs.provenance[j]);
    if (!gs.slack.empty()) out.slack.push_back(gs.slack[j]);
  }
  gs = std::move(out);
}

}  // namespace detail

/// Generators of the Clarke subdifferential of Psi at x: +grad sigma_i for
/// i in A+, -grad sigma_i for i in A-, ordered by (grid index, sign). When
/// Psi(x) = 0 every grid index contributes both signs. `sigma` must be
/// deviations(inst, x)., reusing already computed deviations.
inline GeneratorSet generators_from_deviations(const ProblemInstance& inst, const Vector& x, const Vector& sigma,
                                               double tol_active) {
  inst.check_dim(x);
  const ActiveSets act = active_sets_from(sigma, tol_active);
  GeneratorSet gs;
  const Eigen::Index na = inst.n() + 1;
  const Eigen::Index nb = inst.m() + 1;
  auto push = [&](std::size_t i, int sign) {
    // same arithmetic as sigma_gradient, without the per-call checks
    const auto row = static_cast<Eigen::Index>(i);
    const double d = detail::checked_denominator(inst, x, i);
    const double p = inst.numerator(x, i);
    Vector g(na + nb);
    g.head(na) = -inst.G().row(row).transpose() / d;
    g.tail(nb) = inst.H().row(row).transpose() * (p / (d * d));
    if (sign < 0) g = -g;
    gs.vectors.push_back(std::move(g));
    gs.provenance.emplace_back(i, sign);
    gs.slack.push_back(std::max(0.0, act.psi - sign * sigma[static_cast<Eigen::Index>(i)]));
  };
  if (act.psi == 0.0) {
    for (std::size_t i = 0; i < inst.size(); ++i) {
      push(i, -1);
      push(i, +1);
    }
  } else {
    // merge the two sorted index lists by (index, sign)
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < act.plus.size() || q < act.minus.size()) {
      const bool take_minus =
          q < act.minus.size() && (p >= act.plus.size() || act.minus[q] <= act.plus[p]);
      if (take_minus) {
        push(act.minus[q++], -1);
      } else {
        push(act.plus[p++], +1);
      }
    }
  }
  detail::dedup_exact(gs);
  return gs;
}

inline GeneratorSet subdiff_generators(const ProblemInstance& inst, const Vector& x, double tol_active) {
  return generators_from_deviations(inst, x, deviations(inst, x), tol_active);
}

inline GeneratorSet subdiff_generators(const ProblemInstance& inst, const CoefficientPair& x, double tol_active) {
  return subdiff_generators(inst, x.point(), tol_active);
}

/// True iff <b, h(t_i)> >= 1 - margin on the whole grid.
inline bool feasible(const ProblemInstance& inst, const Vector& x, double margin = 0.0) {
  if (x.size() != inst.dim()) return false;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if (!(inst.denominator(x, i) >= 1.0 - margin)) return false;
  }
  return true;
}

inline bool feasible(const ProblemInstance& inst, const CoefficientPair& x, double margin = 0.0) {
  return feasible(inst, x.point(), margin);
}

}  // namespace ratapprox

#endif  // RATAPPROX_PROBLEM_HPP
