#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "ratapprox/approx_solver.hpp"
#include "ratapprox/experiments.hpp"

using namespace ratapprox;

namespace {

ProblemInstance mono(const char* f, int n, int m, int points) {
  return ProblemInstance::sample(make_uniform_grid(-1.0, 1.0, points), *find_target(f), BasisSpec::monomial(), n,
                                 BasisSpec::monomial(), m);
}

}  // namespace

TEST(InitialPoint, Layout) {
  const ProblemInstance inst = mono("abs", 2, 2, 11);
  EXPECT_EQ(initial_point(inst).point(), (Vector(6) << 0, 0, 0, 1, 0, 0).finished());
  const ProblemInstance e = ProblemInstance::sample(make_uniform_grid(-1, 1, 11), *find_target("sincos"),
                                                    BasisSpec::function_power(Kernel::Exp), 3,
                                                    BasisSpec::function_power(Kernel::Exp), 3);
  const CoefficientPair x0 = initial_point(e);
  EXPECT_EQ(x0.b, (Vector(4) << 1, 0, 0, 0).finished());
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_EQ(e.denominator(x0.point(), i), 1.0);
}

TEST(KnownSolution, Distance) {
  const ProblemInstance inst = mono("one", 1, 1, 100);
  const KnownSolution sol = KnownSolution::on(inst, (Vector(2) << 1, 0).finished(), (Vector(2) << 1, 0).finished());
  EXPECT_EQ(sol.lambda_min, 1.0);
  EXPECT_EQ(distance_to_solution((Vector(4) << 1.5, 0, 1.5, 0).finished(), sol), 0.0);
  EXPECT_EQ(distance_to_solution(Vector(2.0 * sol.direction()), sol), 0.0);
  const Vector w = (Vector(4) << 0, 0.3, 0, -0.4).finished();  // orthogonal to the ray
  EXPECT_NEAR(distance_to_solution(Vector(sol.direction() + w), sol), 0.5, 1e-15);
  // below lambda_min the nearest ray point is the end point
  EXPECT_NEAR(distance_to_solution(Vector(0.5 * sol.direction()), sol), 0.5 * sol.direction().norm(), 1e-15);
}

TEST(Operator, RejectsInfeasiblePoints) {
  const ProblemInstance inst = mono("abs", 1, 1, 5);
  const SubdifferentialOperator T = build_operator(inst);
  EXPECT_THROW(T((Vector(4) << 0, 0, 0.5, 0).finished()), InfeasiblePointError);
}

TEST(Operator, GeneratorsWithinTolerance) {
  const ProblemInstance inst = mono("abs", 2, 2, 41);
  const Vector x = (Vector(6) << 0.05, 0.01, 1.5, 1.0, 0.02, 0.8).finished();
  const ActiveTolerance tol{0.3, 1e-12};
  const GeneratorSet g = build_operator(inst, tol)(x);
  const double p = psi(inst, x);
  ASSERT_FALSE(g.empty());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const auto [i, sign] = g.provenance[j];
    EXPECT_GE(sign * deviation(inst, x, i), p - tol.at(p));
  }
}

TEST(Operator, MaxInnerMatchesBuiltSet) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (const char* f : {"abs", "sin", "runge"}) {
    const ProblemInstance inst = mono(f, 2, 2, 41);
    const SubdifferentialOperator T(inst);
    for (int c = 0; c < 50; ++c) {
      Vector x = initial_point(inst).point();
      for (Eigen::Index j = 0; j < x.size(); ++j) x[j] += 0.1 * gauss(rng);
      x[3] = 1.0 + std::abs(x[4]) + std::abs(x[5]);  // keeps b0 + b1 t + b2 t^2 >= 1 on [-1, 1]
      Vector v(x.size());
      for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = gauss(rng);
      double best = -std::numeric_limits<double>::infinity();
      for (const Vector& g : T(x).vectors) best = std::max(best, g.dot(v));
      EXPECT_EQ(T.max_inner(x, v), best) << f << " case " << c;
    }
  }
  // Psi = 0: every grid index with both signs
  const ProblemInstance one = mono("one", 1, 1, 11);
  const Vector x = (Vector(4) << 1, 0, 1, 0).finished();
  const Vector v = (Vector(4) << 1, -2, 0.5, 3).finished();
  double best = -std::numeric_limits<double>::infinity();
  for (const Vector& g : SubdifferentialOperator(one)(x).vectors) best = std::max(best, g.dot(v));
  EXPECT_EQ(SubdifferentialOperator(one).max_inner(x, v), best);
}

TEST(Solver, ConstantTargetMeetsTarget) {
  const ProblemInstance inst = mono("one", 1, 1, 100);
  SolveConfig cfg;
  cfg.psi_target = 1e-3;
  cfg.max_iter = 20000;
  const auto sol = KnownSolution::on(inst, (Vector(2) << 1, 0).finished(), (Vector(2) << 1, 0).finished());
  for (Variant v : {Variant::V1, Variant::V2}) {
    cfg.variant = v;
    const RunReport r = solve_approximation(inst, cfg, sol, table2().tolerance);
    EXPECT_EQ(r.stop_reason, StopReason::MeritTarget);
    EXPECT_LE(r.records.back().merit, 1e-3);
    EXPECT_LE(*r.records.back().dist_to_solution, 1e-2);
  }
}

TEST(Solver, RungeMeetsTarget) {
  const ProblemInstance inst = mono("runge", 1, 2, 100);
  SolveConfig cfg;
  cfg.psi_target = 1e-3;
  cfg.max_iter = 20000;
  for (Variant v : {Variant::V1, Variant::V2}) {
    cfg.variant = v;
    const RunReport r = solve_approximation(inst, cfg, std::nullopt, table2().tolerance);
    EXPECT_EQ(r.stop_reason, StopReason::MeritTarget);
    EXPECT_LE(r.best_merit, 1e-3);
  }
}

TEST(Solver, AbsDenseGrid) {
  const ProblemInstance inst = mono("abs", 2, 2, 2001);
  SolveConfig cfg;
  cfg.max_iter = 200;
  const RunReport r = solve_approximation(inst, cfg);
  EXPECT_LE(r.best_merit, 0.08);
  EXPECT_EQ(r.iterations(), 200);
}

TEST(Solver, IteratesStayFeasible) {
  const ProblemInstance inst = mono("sqrtabs", 3, 3, 101);
  SolveConfig cfg;
  cfg.max_iter = 50;
  const RunReport r = solve_approximation(inst, cfg);
  for (const IterateRecord& rec : r.records) EXPECT_TRUE(feasible(inst, rec.x, 1e-9)) << "k = " << rec.k;
  for (std::size_t k = 1; k < r.records.size(); ++k) EXPECT_LE(r.best_merit, r.records[k].merit);
}
