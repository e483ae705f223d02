#include <random>

#include <gtest/gtest.h>

#include "ratapprox/checks.hpp"
#include "ratapprox/geometry.hpp"

using namespace ratapprox;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Polyhedron box(double r) {
  return Polyhedron(std::vector<Halfspace>{{v2(1, 0), r}, {v2(-1, 0), r}, {v2(0, 1), r}, {v2(0, -1), r}});
}

}  // namespace

TEST(Halfspace, Projection) {
  EXPECT_EQ(project_halfspace({v2(1, 0), 0.0}, v2(2, 3)), v2(0, 3));
  EXPECT_EQ(project_halfspace({v2(1, 0), 0.0}, v2(-1, 5)), v2(-1, 5));
  EXPECT_LE((project_halfspace({v2(1, 1), 0.0}, v2(1, 1)) - v2(0, 0)).norm(), 1e-15);
}

TEST(Halfspace, FromCut) {
  const Halfspace a = halfspace_from(v2(0, 0), v2(1, 0));
  EXPECT_EQ(a.normal, v2(1, 0));
  EXPECT_EQ(a.offset, 0.0);
  const Halfspace b = halfspace_from(v2(1, 1), v2(0, 2));
  EXPECT_EQ(b.normal, v2(0, 2));
  EXPECT_EQ(b.offset, 2.0);
  EXPECT_THROW(halfspace_from(v2(0, 0), v2(0, 0)), std::invalid_argument);
}

TEST(FeasibleSet, Rows) {
  const ProblemInstance m0 = ProblemInstance::sample(make_uniform_grid(-1, 1, 4), [](double t) { return t; },
                                                     BasisSpec::monomial(), 1, BasisSpec::monomial(), 0);
  const Polyhedron c0 = feasible_set(m0);
  for (std::size_t i = 0; i < c0.size(); ++i) {
    const Halfspace h = c0.halfspace(i);
    EXPECT_EQ(h.normal, (Vector(3) << 0, 0, -1).finished());
    EXPECT_EQ(h.offset, -1.0);
  }
  const ProblemInstance m1 = ProblemInstance::sample(Grid::from_points({-1.0, 1.0}), [](double t) { return t; },
                                                     BasisSpec::monomial(), 0, BasisSpec::monomial(), 1);
  const Polyhedron c1 = feasible_set(m1);
  EXPECT_EQ(c1.halfspace(0).normal, (Vector(3) << 0, -1, 1).finished());
  EXPECT_EQ(c1.halfspace(1).normal, (Vector(3) << 0, -1, -1).finished());
}

TEST(Projection, SmallExamples) {
  for (ProjectionMethod m : {ProjectionMethod::ActiveSet, ProjectionMethod::Dykstra}) {
    ProjectionOptions opt;
    opt.method = m;
    const Polyhedron quadrant(std::vector<Halfspace>{{v2(1, 0), 0.0}, {v2(0, 1), 0.0}});
    EXPECT_LE((project_polyhedron(quadrant, v2(1, 2), opt) - v2(0, 0)).norm(), 1e-9);
    const Polyhedron wedge(std::vector<Halfspace>{{v2(1, 1), 0.0}, {v2(1, -1), 0.0}});
    EXPECT_LE((project_polyhedron(wedge, v2(1, 0), opt) - v2(0, 0)).norm(), 1e-9);
    EXPECT_LE((enumerate_projection(wedge, v2(1, 0)) - v2(0, 0)).norm(), 1e-12);
    // m = 0 feasible set in (a0, b0) coordinates
    const Polyhedron c0({{v2(0, -1), -1.0}});
    EXPECT_EQ(project_polyhedron(c0, v2(3, 0), opt), v2(3, 1));
  }
}

TEST(Projection, Variant1Composition) {
  // P_C(P_H(x)) for C = [-1, 1]^2 and the cut y1 <= 0
  const Vector x = v2(2, 0);
  const Vector ph = project_halfspace(halfspace_from(v2(0, 0), v2(1, 0)), x);
  EXPECT_EQ(ph, v2(0, 0));
  EXPECT_LE((project_polyhedron(box(1.0), ph) - v2(0, 0)).norm(), 1e-12);
  const Polyhedron lower(std::vector<Halfspace>{{v2(0, 1), 0.0}});
  const Vector y = project_halfspace(halfspace_from(v2(0, 0), v2(1, 0)), v2(2, 1));
  EXPECT_EQ(project_polyhedron(lower, y), v2(0, 0));
}

TEST(Projection, CutIntersectedWithBox) {
  const Polyhedron cut_box = box(1.0).with(halfspace_from(v2(0, 0), v2(1, 0)));
  EXPECT_EQ(cut_box.size(), 5u);
  const Vector ref = enumerate_projection(cut_box, v2(2, 0));
  EXPECT_LE((ref - v2(0, 0)).norm(), 1e-12);
  EXPECT_LE((project_polyhedron(cut_box, v2(2, 0)) - ref).norm(), 1e-10);
  const Vector inside = v2(-0.5, 0.5);
  EXPECT_EQ(project_polyhedron(cut_box, inside), inside);
}

TEST(Projection, AgreesWithEnumerationOracle) {
  std::mt19937_64 rng(7);
  ProjectionOptions dyk;
  dyk.method = ProjectionMethod::Dykstra;
  for (int c = 0; c < 200; ++c) {
    const Eigen::Index dim = detail::uniform_int(rng, 1, 6);
    const Polyhedron poly = random_polyhedron(rng, dim, detail::uniform_int(rng, 1, 8));
    const Vector y = detail::gaussian(rng, dim, 3.0);
    const Vector ref = enumerate_projection(poly, y);
    EXPECT_LE((project_polyhedron(poly, y) - ref).norm(), 1e-9) << "case " << c;
    EXPECT_LE((project_polyhedron(poly, y, dyk) - ref).norm(), 1e-6) << "case " << c;
  }
}

TEST(Projection, EmptyPolyhedron) {
  const Polyhedron empty(std::vector<Halfspace>{{v2(1, 0), -1.0}, {v2(-1, 0), -1.0}});  // x <= -1 and x >= 1
  const LeastDistanceResult r = project_least_distance(empty, v2(0, 0));
  EXPECT_FALSE(r.feasible);
  EXPECT_THROW(project_polyhedron(empty, v2(0, 0)), ConvergenceError);
  const DykstraResult d = dykstra(empty, v2(0, 0));
  EXPECT_EQ(d.status, DykstraStatus::Empty);
}

TEST(Projection, DykstraPlateauIsNotEmptiness) {
  // the iterate can stand still for a sweep while the corrections move
  std::mt19937_64 rng(11);
  ProjectionOptions dyk;
  dyk.method = ProjectionMethod::Dykstra;
  int plateaus = 0;
  for (int c = 0; c < 300; ++c) {
    const Eigen::Index dim = detail::uniform_int(rng, 2, 3);
    const Polyhedron poly = random_polyhedron(rng, dim, 8);
    const Vector y = detail::gaussian(rng, dim, 3.0);
    const DykstraResult r = dykstra(poly, y, dyk);
    ASSERT_EQ(r.status, DykstraStatus::Converged) << "case " << c;
    EXPECT_LE((r.point - enumerate_projection(poly, y)).norm(), 1e-8) << "case " << c;
    plateaus += r.sweeps > 5;
  }
  EXPECT_GT(plateaus, 0);
}

TEST(Projection, WithAppendsHalfspace) {
  const Polyhedron p = box(2.0);
  const Polyhedron q = p.with({v2(1, 1), 0.5});
  EXPECT_EQ(q.size(), p.size() + 1);
  EXPECT_EQ(q.halfspace(4).offset, 0.5);
  EXPECT_THROW(p.with({Vector::Ones(3), 0.0}), std::invalid_argument);
}
