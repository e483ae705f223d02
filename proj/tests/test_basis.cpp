#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "ratapprox/basis.hpp"

using namespace ratapprox;

TEST(Basis, MonomialPowers) {
  const Vector v = eval_basis(BasisSpec::monomial(), 2, 0.5);
  ASSERT_EQ(v.size(), 3);
  EXPECT_EQ(v[0], 1.0);
  EXPECT_EQ(v[1], 0.5);
  EXPECT_EQ(v[2], 0.25);
}

TEST(Basis, ExpPowerAtZero) {
  const Vector v = eval_basis(BasisSpec::function_power(Kernel::Exp), 2, 0.0);
  EXPECT_EQ(v, Vector::Ones(3));
}

TEST(Basis, SinPowerAtHalfPi) {
  const Vector v = eval_basis(BasisSpec::function_power(Kernel::Sin), 2, std::numbers::pi / 2);
  EXPECT_EQ(v, Vector::Ones(3));
}

TEST(Basis, GridMatrices) {
  const std::vector<double> pm{-1.0, 1.0};
  const Matrix a = eval_basis_grid(BasisSpec::monomial(), 1, pm);
  EXPECT_EQ(a(0, 0), 1.0);
  EXPECT_EQ(a(0, 1), -1.0);
  EXPECT_EQ(a(1, 0), 1.0);
  EXPECT_EQ(a(1, 1), 1.0);

  const std::vector<double> zero{0.0};
  const Matrix b = eval_basis_grid(BasisSpec::monomial(), 0, zero);
  ASSERT_EQ(b.rows(), 1);
  ASSERT_EQ(b.cols(), 1);
  EXPECT_EQ(b(0, 0), 1.0);

  const std::vector<double> zo{0.0, 1.0};
  const Matrix c = eval_basis_grid(BasisSpec::function_power(Kernel::Exp), 1, zo);
  EXPECT_EQ(c(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(c(1, 1), std::exp(1.0));
}

TEST(Basis, RowsMatchPointwiseEvaluation) {
  std::vector<double> grid;
  for (int i = 0; i <= 30; ++i) grid.push_back(-1.0 + i / 15.0);
  for (const BasisSpec& spec : {BasisSpec::monomial(), BasisSpec::function_power(Kernel::Exp),
                                BasisSpec::function_power(Kernel::Cos)}) {
    const Matrix m = eval_basis_grid(spec, 5, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vector row = m.row(static_cast<Eigen::Index>(i)).transpose();
      EXPECT_EQ(row, eval_basis(spec, 5, grid[i])) << spec.describe() << " at " << grid[i];
    }
  }
}

TEST(Basis, LowerDegreeIsPrefix) {
  for (double t : {-0.9, -0.1, 0.3, 0.77}) {
    const Vector hi = eval_basis(BasisSpec::function_power(Kernel::Sin), 6, t);
    for (int d = 0; d < 6; ++d) EXPECT_EQ(Vector(hi.head(d + 1)), eval_basis(BasisSpec::function_power(Kernel::Sin), d, t));
  }
}

TEST(Basis, NegativeDegreeRejected) {
  EXPECT_THROW(eval_basis(BasisSpec::monomial(), -1, 0.0), std::invalid_argument);
}

TEST(Basis, TabulatedLookup) {
  std::istringstream in("t,h\n-1,2\n0,3\n1,5\n");
  const BasisSpec spec = BasisSpec::tabulated(read_table_csv(in));
  const Vector v = eval_basis(spec, 2, 1.0);
  EXPECT_EQ(v[0], 1.0);
  EXPECT_EQ(v[1], 5.0);
  EXPECT_EQ(v[2], 25.0);
  // a different rounding of the same abscissa still matches
  EXPECT_EQ(eval_basis(spec, 1, 1.0 - 1e-15)[1], 5.0);
  EXPECT_THROW(eval_basis(spec, 1, 0.5), DomainError);
}

TEST(Basis, TableParseErrorsNameTheLine) {
  std::istringstream bad("t,h\n0,1\n0.5,oops\n");
  try {
    read_table_csv(bad, "tab.csv");
    FAIL() << "expected a parse error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("tab.csv:3"), std::string::npos) << e.what();
  }
  std::istringstream unsorted("0,1\n0,2\n");
  EXPECT_THROW(read_table_csv(unsorted), std::runtime_error);
}

TEST(Basis, KernelNamesRoundTrip) {
  for (Kernel k : {Kernel::Exp, Kernel::Sin, Kernel::Cos, Kernel::Abs, Kernel::Identity}) {
    EXPECT_EQ(parse_kernel(kernel_name(k)), k);
  }
  EXPECT_FALSE(parse_kernel("tan"));
}
