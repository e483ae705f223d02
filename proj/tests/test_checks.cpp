#include <gtest/gtest.h>

#include "ratapprox/checks.hpp"

using namespace ratapprox;

TEST(Checks, SeedZeroPasses) {
  CheckOptions opt;
  opt.known_runs = false;
  const CheckReport r = run_checks(0, opt);
  for (const SuiteResult& s : r.suites) EXPECT_TRUE(s.passed()) << s.name << " worst " << s.worst;
  EXPECT_TRUE(r.passed());
  const auto j = r.to_json();
  EXPECT_EQ(j.at("seed"), 0);
  EXPECT_TRUE(j.at("passed").get<bool>());
}

TEST(Checks, SignFlippedGradientIsCaught) {
  const SuiteResult s = check_gradient(0, [](const ProblemInstance& inst, const Vector& x, std::size_t i) {
    return Vector(-sigma_gradient(inst, x, i));
  });
  EXPECT_FALSE(s.passed());
  EXPECT_EQ(s.failures, s.cases);
}

TEST(Checks, BrokenProjectionIsCaught) {
  // shifting every projected point off the polyhedron breaks the oracle comparison
  Rng rng(3);
  const Polyhedron poly = random_polyhedron(rng, 3, 5);
  const Vector y = detail::gaussian(rng, 3, 3.0);
  const Vector good = project_polyhedron(poly, y);
  EXPECT_LE((good - enumerate_projection(poly, y)).norm(), 1e-9);
  EXPECT_GT((Vector(good + Vector::Constant(3, 1e-3)) - enumerate_projection(poly, y)).norm(), 1e-6);
}

TEST(Checks, ReproducibleAcrossCalls) {
  EXPECT_EQ(check_quasi_convexity(4).worst, check_quasi_convexity(4).worst);
  Rng a = detail::suite_rng(9, 1);
  Rng b = detail::suite_rng(9, 1);
  EXPECT_EQ(a(), b());
}

TEST(Checks, ExampleDemo) {
  for (const Grid& g : {Grid::from_points({-1.0, 0.0, 1.0}), make_uniform_grid(-1.0, 1.0, 21)}) {
    const ExampleDemo d = example_demo(g);
    EXPECT_TRUE(d.passed);
    EXPECT_GE(d.limit_generators, 3u);
    for (const auto& p : d.points) {
      EXPECT_EQ(p.generators, 1u);
      EXPECT_GT(p.limit_gap, 2.0);
    }
  }
}

TEST(Checks, KnownRunsOnSmallestRow) {
  const ExperimentTable t = table2();
  const ExperimentRow& row = t.rows.front();  // one (1,1)
  const ProblemInstance inst = make_instance(row);
  const KnownSolution sol = *known_solution(inst, row);
  std::vector<KnownRun> runs;
  for (Variant v : {Variant::V1, Variant::V2}) {
    SolveConfig cfg = t.config;
    cfg.variant = v;
    runs.push_back({row.label(), solve_approximation(inst, cfg, sol, t.tolerance), sol});
  }
  for (const SuiteResult& s : check_known_runs(runs)) EXPECT_TRUE(s.passed()) << s.name << " worst " << s.worst;
}

TEST(Checks, EnumerationOracleOnBox) {
  const Polyhedron box(std::vector<Halfspace>{{(Vector(2) << 1, 0).finished(), 1.0},
                        {(Vector(2) << -1, 0).finished(), 1.0},
                        {(Vector(2) << 0, 1).finished(), 1.0},
                        {(Vector(2) << 0, -1).finished(), 1.0}});
  EXPECT_EQ(enumerate_projection(box, (Vector(2) << 3, -4).finished()), (Vector(2) << 1, -1).finished());
  EXPECT_EQ(enumerate_projection(box, (Vector(2) << 3, 0.5).finished()), (Vector(2) << 1, 0.5).finished());
}
