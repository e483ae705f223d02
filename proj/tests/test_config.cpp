#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ratapprox/config.hpp"

using namespace ratapprox;

namespace {

RunConfig parse(const std::string& text, const std::filesystem::path& base = {}) {
  std::istringstream in(text);
  return parse_config(in, "test.conf", base);
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

const std::string minimal = "problem.function = abs\nbasis.num.degree = 2\nbasis.den.degree = 2\n";

}  // namespace

TEST(Config, Defaults) {
  const RunConfig c = parse(minimal);
  EXPECT_EQ(c.function, "abs");
  EXPECT_EQ(c.lo, -1.0);
  EXPECT_EQ(c.hi, 1.0);
  EXPECT_EQ(c.points, 2001);
  EXPECT_EQ(c.num.spec.family, Family::Monomial);
  EXPECT_EQ(c.solver.variant, Variant::V2);
  EXPECT_FALSE(c.solver.psi_target);
  EXPECT_EQ(c.tolerance.rel, ActiveTolerance{}.rel);
  EXPECT_EQ(c.output_dir, ".");
  EXPECT_EQ(c.instance().size(), 2001u);
}

TEST(Config, FullExample) {
  const RunConfig c = parse(
      "# comment\n"
      "problem.function = sincos\n"
      "\n"
      "grid.lo = -1\n  grid.hi = 1  \n grid.points = 20\n"
      "basis.num.family = power\nbasis.num.kernel = exp\nbasis.num.degree = 3\n"
      "basis.den.family = power\nbasis.den.kernel = sin\nbasis.den.degree = 2\n"
      "solver.variant = 1\nsolver.beta = 0.5\nsolver.delta = 0.25\nsolver.theta = 0.75\n"
      "solver.max_iter = 123\nsolver.psi_target = 1e-2\nsolver.step_tol = 1e-11\n"
      "solver.residual_tol = 1e-9\nsolver.active_rel = 0.5\noutput.dir = results\n");
  EXPECT_EQ(c.points, 20);
  EXPECT_EQ(c.num.spec.kernel, Kernel::Exp);
  EXPECT_EQ(c.den.spec.kernel, Kernel::Sin);
  EXPECT_EQ(c.den.degree, 2);
  EXPECT_EQ(c.solver.variant, Variant::V1);
  EXPECT_EQ(c.solver.linesearch.beta, 0.5);
  EXPECT_EQ(c.solver.linesearch.delta, 0.25);
  EXPECT_EQ(c.solver.linesearch.theta, 0.75);
  EXPECT_EQ(c.solver.max_iter, 123);
  EXPECT_EQ(*c.solver.psi_target, 1e-2);
  EXPECT_EQ(c.solver.step_tol, 1e-11);
  EXPECT_EQ(c.solver.residual_tol, 1e-9);
  EXPECT_EQ(c.tolerance.rel, 0.5);
  EXPECT_EQ(c.output_dir, "results");
}

TEST(Config, ErrorsNameTheLine) {
  EXPECT_EQ(error_line(minimal + "grid.points = 1\n"), 4);
  EXPECT_EQ(error_line(minimal + "solver.gamma = 2\n"), 4);
  EXPECT_EQ(error_line("problem.function = abs\nproblem.function = sin\nbasis.num.degree = 1\nbasis.den.degree = 1\n"), 2);
  EXPECT_EQ(error_line("problem.function = nope\nbasis.num.degree = 1\nbasis.den.degree = 1\n"), 1);
  EXPECT_EQ(error_line(minimal + "solver.variant = 3\n"), 4);
  EXPECT_EQ(error_line(minimal + "solver.delta = 1.5\n"), 4);
  EXPECT_EQ(error_line(minimal + "solver.max_iter = 1.5\n"), 4);
  EXPECT_EQ(error_line(minimal + "grid.lo = abc\n"), 4);
  EXPECT_EQ(error_line(minimal + "solver.active_rel = 1\n"), 4);
  EXPECT_EQ(error_line(minimal + "basis.num.family = power\n"), 4);
  EXPECT_EQ(error_line(minimal + "basis.num.kernel = exp\n"), 4);
  EXPECT_EQ(error_line(minimal + "just text\n"), 4);
  EXPECT_EQ(error_line("problem.function = abs\nbasis.num.degree = 2\n"), 0);
}

TEST(Config, MessageFormat) {
  try {
    parse(minimal + "grid.points = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("test.conf:4:", 0), 0u) << e.what();
  }
}

TEST(Config, CsvTarget) {
  const auto dir = std::filesystem::temp_directory_path() / "ratapprox_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "f.csv");
    f << "t,f\n-1,1\n0,0\n1,1\n";
  }
  const RunConfig c = parse("problem.csv = f.csv\ngrid.points = 3\nbasis.num.degree = 0\nbasis.den.degree = 0\n", dir);
  EXPECT_EQ(c.f_values, (std::vector<double>{1.0, 0.0, 1.0}));
  EXPECT_EQ(c.f_at(0.5), 0.5);
  const ProblemInstance inst = c.instance();
  EXPECT_EQ(inst.f(2), 1.0);
  // row count must match the grid
  try {
    parse("problem.csv = f.csv\ngrid.points = 4\nbasis.num.degree = 0\nbasis.den.degree = 0\n", dir);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 1);
  }
  EXPECT_THROW(parse("problem.csv = missing.csv\ngrid.points = 3\nbasis.num.degree = 0\nbasis.den.degree = 0\n", dir),
               ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(Config, TabulatedBasis) {
  const auto dir = std::filesystem::temp_directory_path() / "ratapprox_config_table";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "h.csv");
    f << "-1,0.5\n0,1\n1,2\n";
  }
  const RunConfig c = parse(
      "problem.function = abs\ngrid.points = 3\nbasis.num.degree = 1\n"
      "basis.den.family = tabulated\nbasis.den.table = h.csv\nbasis.den.degree = 1\n",
      dir);
  EXPECT_EQ(c.instance().H()(2, 1), 2.0);
  // a table that misses grid points is rejected
  EXPECT_THROW(parse("problem.function = abs\ngrid.points = 5\nbasis.num.degree = 1\n"
                     "basis.den.family = tabulated\nbasis.den.table = h.csv\nbasis.den.degree = 1\n",
                     dir),
               ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(Config, MissingFile) {
  EXPECT_THROW(load_config("/nonexistent/x.conf"), ConfigError);
}
