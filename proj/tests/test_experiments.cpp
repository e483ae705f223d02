#include <gtest/gtest.h>

#include "ratapprox/experiments.hpp"

using namespace ratapprox;

TEST(Tables, Shapes) {
  const ExperimentTable t1 = table1();
  EXPECT_EQ(t1.rows.size(), 6u);
  EXPECT_EQ(t1.config.max_iter, 200);
  for (const ExperimentRow& r : t1.rows) EXPECT_EQ(r.points, 2001);

  const ExperimentTable t2 = table2();
  EXPECT_EQ(t2.config.max_iter, 20000);
  EXPECT_EQ(*t2.config.psi_target, 1e-3);
  for (const ExperimentRow& r : t2.rows) {
    ASSERT_TRUE(r.a_star && r.b_star) << r.label();
    const ProblemInstance inst = make_instance(r);
    const KnownSolution sol = *known_solution(inst, r);
    // the stated representation is exact on the grid
    EXPECT_LE(psi(inst, Vector(sol.lambda_min * sol.direction())), 1e-14) << r.label();
  }

  const ExperimentTable t3 = table3();
  EXPECT_EQ(t3.rows.size(), 8u);
  EXPECT_EQ(*t3.config.psi_target, 1e-2);
  for (const ExperimentRow& r : t3.rows) {
    EXPECT_EQ(r.function, "sincos");
    EXPECT_EQ(r.basis.family, Family::FunctionPower);
  }
  EXPECT_FALSE(find_table("table4"));
}

TEST(Tables, RungeRow) {
  const ExperimentTable t = table2();
  for (const ExperimentRow& r : t.rows) {
    if (r.function != "runge" || r.n != 1) continue;
    const RowOutcome o = run_row(t, r, Variant::V2);
    EXPECT_FALSE(o.failed());
    EXPECT_LE(o.report.records.back().merit, 1e-3);
    ASSERT_TRUE(o.final_distance);
  }
}

TEST(Tables, ExpKernelRow) {
  const ExperimentTable t = table3();
  const ExperimentRow& r = t.rows.front();
  ASSERT_EQ(r.points, 20);
  for (Variant v : {Variant::V1, Variant::V2}) {
    const RowOutcome o = run_row(t, r, v);
    EXPECT_FALSE(o.failed());
    EXPECT_LE(o.report.records.back().merit, 1e-2);
  }
}

TEST(Tables, SolverErrorsAreCaught) {
  ExperimentTable t = table1();
  ExperimentRow bad = t.rows.front();
  bad.function = "unknown";
  const RowOutcome o = run_row(t, bad, Variant::V1);
  EXPECT_TRUE(o.failed());
  EXPECT_FALSE(o.error.empty());
}
