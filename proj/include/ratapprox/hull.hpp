#ifndef RATAPPROX_HULL_HPP
#define RATAPPROX_HULL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ratapprox/error.hpp"

namespace ratapprox {

struct MinNormResult {
  Eigen::VectorXd point;
  double norm = 0.0;
  Eigen::VectorXd weights;  // convex weights over the input vectors
  int iterations = 0;
};

/// Minimum-norm point of conv{vectors} by Wolfe's active-set method: the
/// support set grows by the vertex minimising <v, p>, and the affine
/// minimiser over the support replaces p, with weights clipped back into
/// the simplex when it leaves it. Stops when ||p|| <= tol or
/// ||p||^2 - min_i <v_i, p> <= gap_tol * max_i ||v_i||^2. Throws
/// ConvergenceError (carrying the current hull point) after max_iter steps.
inline MinNormResult min_norm_point(const std::vector<Eigen::VectorXd>& vectors, double tol, double gap_tol = 1e-12,
                                    int max_iter = 1000) {
  if (vectors.empty()) throw std::invalid_argument("min-norm point of an empty set");
  const auto k = static_cast<Eigen::Index>(vectors.size());
  const Eigen::Index dim = vectors.front().size();
  auto vec = [&](Eigen::Index i) -> const Eigen::VectorXd& { return vectors[static_cast<std::size_t>(i)]; };

  double scale = 0.0;
  Eigen::Index start = 0;
  double start_norm = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (vec(i).size() != dim) throw std::invalid_argument("hull vectors differ in dimension");
    const double nn = vec(i).squaredNorm();
    scale = std::max(scale, nn);
    if (nn < start_norm) {
      start_norm = nn;
      start = i;
    }
  }
  const double gap_abs = gap_tol * std::max(scale, std::numeric_limits<double>::min());

  std::vector<Eigen::Index> support{start};
  std::vector<double> lambda{1.0};
  Eigen::VectorXd p = vec(start);

  auto result = [&](int it) {
    MinNormResult out;
    out.point = p;
    out.norm = p.norm();
    out.weights = Eigen::VectorXd::Zero(k);
    for (std::size_t s = 0; s < support.size(); ++s) out.weights[support[s]] = lambda[s];
    out.iterations = it;
    return out;
  };
  auto rebuild = [&]() {
    p.setZero(dim);
    for (std::size_t s = 0; s < support.size(); ++s) p += lambda[s] * vec(support[s]);
  };

  for (int it = 0; it < max_iter; ++it) {
    if (p.norm() <= tol) return result(it);
    Eigen::Index entering = 0;
    double lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < k; ++i) {
      const double v = vec(i).dot(p);
      if (v < lo) {
        lo = v;
        entering = i;
      }
    }
    if (p.squaredNorm() - lo <= gap_abs) return result(it);
    if (std::find(support.begin(), support.end(), entering) != support.end()) return result(it);
    support.push_back(entering);
    lambda.push_back(0.0);

    // minor cycle: affine minimiser over the support, clipped into the simplex
    for (;;) {
      const auto s = static_cast<Eigen::Index>(support.size());
      Eigen::MatrixXd K = Eigen::MatrixXd::Zero(s + 1, s + 1);
      for (Eigen::Index r = 0; r < s; ++r) {
        for (Eigen::Index c = 0; c < s; ++c) {
          K(r, c) = vec(support[static_cast<std::size_t>(r)]).dot(vec(support[static_cast<std::size_t>(c)]));
        }
        K(r, s) = 1.0;
        K(s, r) = 1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
      rhs[s] = 1.0;
      const Eigen::VectorXd mu = K.colPivHouseholderQr().solve(rhs).head(s);
      if (!mu.allFinite()) return result(it);

      double step = 1.0;
      for (Eigen::Index r = 0; r < s; ++r) {
        if (mu[r] <= 0.0) {
          const double l = lambda[static_cast<std::size_t>(r)];
          step = std::min(step, l / (l - mu[r]));
        }
      }
      for (Eigen::Index r = 0; r < s; ++r) {
        auto& l = lambda[static_cast<std::size_t>(r)];
        l += step * (mu[r] - l);
      }
      if (step >= 1.0) {
        rebuild();
        break;
      }
      std::vector<Eigen::Index> keep_s;
      std::vector<double> keep_l;
      for (std::size_t r = 0; r < support.size(); ++r) {
        if (lambda[r] > 1e-15) {
          keep_s.push_back(support[r]);
          keep_l.push_back(lambda[r]);
        }
      }
      if (keep_s.empty()) return result(it);
      double total = 0.0;
      for (double l : keep_l) total += l;
      for (double& l : keep_l) l /= total;
      support = std::move(keep_s);
      lambda = std::move(keep_l);
      rebuild();
    }
  }
  throw ConvergenceError("min-norm point did not converge in " + std::to_string(max_iter) + " steps", p,
                         p.squaredNorm());
}

}  // namespace ratapprox

#endif  // RATAPPROX_HULL_HPP
