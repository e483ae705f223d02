// Best (2,2) rational approximation of |t| on 201 points of [-1, 1].

#include <iostream>

#include "ratapprox/ratapprox.hpp"

int main() {
  using namespace ratapprox;
  const ProblemInstance inst = ProblemInstance::sample(make_uniform_grid(-1.0, 1.0, 201), *find_target("abs"),
                                                       BasisSpec::monomial(), 2, BasisSpec::monomial(), 2);
  SolveConfig cfg;
  cfg.max_iter = 200;
  const RunReport report = solve_approximation(inst, cfg);
  const CoefficientPair best = CoefficientPair::from_point(report.best_x, inst.n());
  std::cout << "stop " << stop_reason_name(report.stop_reason) << " after " << report.iterations()
            << " iterations\n"
            << "best psi " << format_number(report.best_merit) << " at iteration " << report.best_iter << "\n"
            << "a = " << best.a.transpose() << "\nb = " << best.b.transpose() << "\n";
  return report.best_merit <= 0.08 ? 0 : 1;
}
