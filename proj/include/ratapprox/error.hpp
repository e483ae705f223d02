#ifndef RATAPPROX_ERROR_HPP
#define RATAPPROX_ERROR_HPP

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ratapprox {

/// Query outside the domain a basis or target is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A coefficient pair whose denominator is not positive somewhere on the grid.
class InfeasiblePointError : public std::runtime_error {
 public:
  InfeasiblePointError(const std::string& what, std::size_t index, double denominator)
      : std::runtime_error(what), index_(index), denominator_(denominator) {}

  std::size_t index() const { return index_; }
  double denominator() const { return denominator_; }

 private:
  std::size_t index_;
  double denominator_;
};

/// An iterative routine ran out of budget before reaching its tolerance.
/// Carries the best iterate seen and how far it is from acceptable.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd best, double residual)
      : std::runtime_error(what), best_(std::move(best)), residual_(residual) {}

  const Eigen::VectorXd& best() const { return best_; }
  double residual() const { return residual_; }

 private:
  Eigen::VectorXd best_;
  double residual_;
};

/// A finite-difference step pushed a perturbed point out of the domain.
class StepSizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The minimax oracle could not decide feasibility of some level set.
class IndeterminateError : public std::runtime_error {
 public:
  IndeterminateError(const std::string& what, double level) : std::runtime_error(what), level_(level) {}

  double level() const { return level_; }

 private:
  double level_;
};

}  // namespace ratapprox

#endif  // RATAPPROX_ERROR_HPP
