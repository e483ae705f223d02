// f = 0, numerator degree 2, constant denominator. Along x_n = (-1, 1/n, 2, 1)
// only t = 1 attains the maximum; at the limit (-1, 0, 2, 1) t = -1, 0, 1 all
// do. The subdifferential at the limit has generators that no x_n comes near.

#include <iostream>

#include "ratapprox/ratapprox.hpp"

int main() {
  using namespace ratapprox;
  const Grid grid = Grid::from_points({-1.0, 0.0, 1.0});
  const ProblemInstance inst =
      ProblemInstance::sample(grid, [](double) { return 0.0; }, BasisSpec::monomial(), 2, BasisSpec::monomial(), 0);

  Vector limit(4);
  limit << -1.0, 0.0, 2.0, 1.0;
  std::cout << "limit point psi " << format_number(psi(inst, limit)) << ", generators:\n";
  for (const Vector& g : subdiff_generators(inst, limit, 1e-9).vectors) std::cout << "  " << g.transpose() << "\n";

  for (int n : {10, 100, 1000}) {
    Vector x(4);
    x << -1.0, 1.0 / n, 2.0, 1.0;
    std::cout << "n = " << n << "  psi " << format_number(psi(inst, x)) << ", generators:\n";
    for (const Vector& g : subdiff_generators(inst, x, 1e-9).vectors) std::cout << "  " << g.transpose() << "\n";
  }
  const ExampleDemo demo = example_demo(grid);
  std::cout << (demo.passed ? "limit generators stay out of reach\n" : "unexpected generator sets\n");
  return demo.passed ? 0 : 1;
}
