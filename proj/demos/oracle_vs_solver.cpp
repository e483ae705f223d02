// The level-set oracle brackets the grid minimax value; the solver's best
// value has to sit above it.

#include <iostream>

#include "ratapprox/ratapprox.hpp"

int main() {
  using namespace ratapprox;
  const ProblemInstance inst = ProblemInstance::sample(make_uniform_grid(-1.0, 1.0, 101), *find_target("abs"),
                                                       BasisSpec::monomial(), 2, BasisSpec::monomial(), 2);
  const MinimaxResult orc = bisection_minimax(inst);
  SolveConfig cfg;
  cfg.max_iter = 200;
  const RunReport report = solve_approximation(inst, cfg);
  std::cout << "oracle  " << format_number(orc.value) << "  in [" << format_number(orc.lo) << ", "
            << format_number(orc.hi) << "]\n"
            << "solver  " << format_number(report.best_merit) << " after " << report.iterations()
            << " iterations\n"
            << "witness psi " << format_number(psi(inst, orc.witness->point())) << "\n";
  return orc.value <= report.best_merit + 1e-6 ? 0 : 1;
}
