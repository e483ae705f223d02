#include <cmath>

#include <gtest/gtest.h>

#include "ratapprox/vip.hpp"

using namespace ratapprox;

namespace {

Vector s(double v) { return Vector::Constant(1, v); }

// T(x) = {2x} on the real line
struct Twice {
  GeneratorSet operator()(const Vector& x) const {
    GeneratorSet g;
    g.vectors.push_back(2.0 * x);
    g.provenance.emplace_back(0, 1);
    return g;
  }
};

Polyhedron interval(double lo, double hi) { return Polyhedron(std::vector<Halfspace>{{s(-1.0), -lo}, {s(1.0), hi}}); }

LinesearchParams plain() {
  LinesearchParams p;
  p.beta = 1.0;
  p.delta = 0.5;
  p.theta = 0.5;
  return p;
}

}  // namespace

TEST(Linesearch, AcceptsFullStep) {
  const Polyhedron C = interval(1.0, 2.0);
  const auto proj = [&](const Vector& y) { return project_polyhedron(C, y); };
  const LinesearchResult r = linesearch_G(Twice{}, proj, s(1.5), plain());
  EXPECT_EQ(r.alpha, 1.0);
  EXPECT_NEAR(r.z[0], 1.0, 1e-12);
  EXPECT_NEAR(r.u_alpha[0], 2.0, 1e-12);
  EXPECT_NEAR(r.lhs, 1.0, 1e-12);
  EXPECT_NEAR(r.rhs, 0.75, 1e-12);
}

TEST(Linesearch, HalvesOnce) {
  const Polyhedron C = interval(0.0, 10.0);
  const auto proj = [&](const Vector& y) { return project_polyhedron(C, y); };
  const LinesearchResult r = linesearch_G(Twice{}, proj, s(4.0), plain());
  EXPECT_NEAR(r.z[0], 0.0, 1e-12);
  EXPECT_EQ(r.alpha, 0.5);
  EXPECT_NEAR(r.u_alpha[0], 4.0, 1e-12);
  EXPECT_EQ(r.trials, 2);
  EXPECT_GE(r.lhs, r.rhs);
}

TEST(Linesearch, RejectsBadParameters) {
  LinesearchParams p = plain();
  p.delta = 1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = plain();
  p.theta = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Linesearch, FailureWhenNoStepQualifies) {
  // away from the start point the operator flips sign, so no step passes
  const auto away = [](const Vector& x) {
    GeneratorSet g;
    g.vectors.push_back(x[0] == 3.5 ? s(-1.0) : s(1.0));
    g.provenance.emplace_back(0, 1);
    return g;
  };
  const Polyhedron C = interval(0.0, 10.0);
  const auto proj = [&](const Vector& y) { return project_polyhedron(C, y); };
  LinesearchParams p = plain();
  p.alpha_min = 1e-3;
  EXPECT_THROW(linesearch_G(away, proj, s(3.5), p), LinesearchFailure);
}

TEST(Steps, Variants) {
  const Polyhedron box(std::vector<Halfspace>{{(Vector(2) << 1, 0).finished(), 1.0},
                        {(Vector(2) << -1, 0).finished(), 1.0},
                        {(Vector(2) << 0, 1).finished(), 1.0},
                        {(Vector(2) << 0, -1).finished(), 1.0}});
  const Vector x = (Vector(2) << 2, 0).finished();
  const Vector zero = Vector::Zero(2);
  const Vector u = (Vector(2) << 1, 0).finished();
  EXPECT_LE(step_variant_1(x, zero, u, box).norm(), 1e-12);
  EXPECT_LE(step_variant_2(x, zero, u, box).norm(), 1e-10);
  const Vector inside = (Vector(2) << -0.5, 0.25).finished();
  EXPECT_EQ(step_variant_1(inside, zero, u, box), inside);
  EXPECT_EQ(step_variant_2(inside, zero, u, box), inside);
}

TEST(Solve, OneDimensionalContraction) {
  const Polyhedron C = interval(1.0, 2.0);
  for (Variant v : {Variant::V1, Variant::V2}) {
    SolveConfig cfg;
    cfg.variant = v;
    cfg.max_iter = 100;
    const RunReport r = solve(Twice{}, [](const Vector& x) { return x[0] * x[0]; }, C, s(2.0), cfg,
                              [](const Vector& x) { return std::abs(x[0] - 1.0); });
    ASSERT_FALSE(r.records.empty());
    EXPECT_LE(std::abs(r.records.back().x[0] - 1.0), 1e-8);
    for (std::size_t k = 0; k + 1 < r.records.size(); ++k) {
      if (*r.records[k].dist_to_solution == 0.0) break;
      EXPECT_LT(*r.records[k + 1].dist_to_solution, *r.records[k].dist_to_solution) << "k = " << k;
    }
  }
}

TEST(Solve, StationaryStart) {
  const Polyhedron C = interval(1.0, 2.0);
  const auto constant = [](const Vector&) {
    GeneratorSet g;
    g.vectors.push_back(s(1.0));
    g.provenance.emplace_back(0, 1);
    return g;
  };
  SolveConfig cfg;
  const RunReport r = solve(constant, [](const Vector& x) { return x[0]; }, C, s(1.0), cfg);
  EXPECT_EQ(r.stop_reason, StopReason::NaturalResidual);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].k, 0);
  EXPECT_EQ(r.iterations(), 0);
}

TEST(Solve, MeritTargetComesFirst) {
  const Polyhedron C = interval(1.0, 2.0);
  const auto constant = [](const Vector&) {
    GeneratorSet g;
    g.vectors.push_back(s(1.0));
    g.provenance.emplace_back(0, 1);
    return g;
  };
  SolveConfig cfg;
  cfg.psi_target = 5.0;
  const RunReport r = solve(constant, [](const Vector& x) { return x[0]; }, C, s(1.0), cfg);
  EXPECT_EQ(r.stop_reason, StopReason::MeritTarget);
}

TEST(Solve, MaxIterAndBestTracking) {
  const Polyhedron C = interval(1.0, 2.0);
  SolveConfig cfg;
  cfg.max_iter = 1;
  const RunReport r = solve(Twice{}, [](const Vector& x) { return x[0]; }, C, s(2.0), cfg);
  EXPECT_EQ(r.stop_reason, StopReason::MaxIter);
  EXPECT_EQ(r.iterations(), 1);
  EXPECT_EQ(r.best_iter, 1);
  EXPECT_EQ(r.best_merit, r.records[1].merit);
}

TEST(MinNorm, HullElement) {
  GeneratorSet g;
  g.vectors = {(Vector(2) << 2, 0).finished(), (Vector(2) << 0, 2).finished()};
  const Vector m = min_norm_element(g);
  EXPECT_NEAR(m[0], 1.0, 1e-12);
  EXPECT_NEAR(m[1], 1.0, 1e-12);
}

TEST(Config, Validation) {
  SolveConfig cfg;
  cfg.max_iter = -1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}
