#include "eigenbox/mesh.hpp"
#include "eigenbox/potential.hpp"
#include "eigenbox/quadrature.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace eigenbox {
namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

TEST(Quadrature, TriangleRuleExactToDegreeTen) {
  const QuadratureRule& rule = triangle_rule(10);
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  EXPECT_NEAR(wsum, 1.0, 1e-14);
  // Reference triangle (0,0),(1,0),(0,1): integral of x^a y^b = a! b! / (a+b+2)!.
  for (int a = 0; a <= 10; ++a)
    for (int b = 0; a + b <= 10; ++b) {
      double s = 0.0;
      for (std::size_t q = 0; q < rule.weights.size(); ++q)
        s += rule.weights[q] * std::pow(rule.points[q][1], a) * std::pow(rule.points[q][2], b);
      const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
      EXPECT_NEAR(0.5 * s, exact, 1e-13 * exact) << "a=" << a << " b=" << b;
    }
}

TEST(Quadrature, PointsInsideTriangle) {
  for (const auto& l : triangle_rule(10).points) {
    EXPECT_GE(l.minCoeff(), 0.0);
    EXPECT_NEAR(l.sum(), 1.0, 1e-15);
  }
}

TEST(Quadrature, GaussLegendre) {
  const LineRule& rule = gauss_legendre(5);
  for (int d = 0; d <= 9; ++d) {
    double s = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) s += rule.weights[q] * std::pow(rule.points[q], d);
    EXPECT_NEAR(s, 1.0 / (d + 1), 1e-15);
  }
}

TEST(Harmonic, Pi0OnUnitTriangle) {
  const Mesh mesh({Point(0, 0), Point(1, 0), Point(0, 1)}, {{0, 1, 2}}, {0});
  const auto v = Potential::harmonic().pi0(mesh);
  EXPECT_NEAR(v[0], 1.0 / 6.0, 1e-15);
}

TEST(Harmonic, MidpointFormulaMatchesQuadrature) {
  const Mesh mesh = uniform_red_refine(build_square_mesh(8.0, 4));
  const Potential V = Potential::harmonic();
  const auto mean = V.pi0(mesh);
  const QuadratureRule& rule = triangle_rule(10);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const auto& l = rule.points[q];
      s += rule.weights[q] * V(l[0] * mesh.vertex(tri[0]) + l[1] * mesh.vertex(tri[1]) + l[2] * mesh.vertex(tri[2]));
    }
    EXPECT_NEAR(mean[t], s, 1e-13 * std::max(1.0, s));
  }
}

TEST(Harmonic, SupIsSixtyFourOnSquare) {
  const Mesh mesh = build_square_mesh(8.0, 8);
  const auto sup = Potential::harmonic().elementwise_sup(mesh);
  EXPECT_DOUBLE_EQ(*std::max_element(sup.begin(), sup.end()), 64.0);
}

TEST(Potentials, MeanBelowSup) {
  const Mesh square = uniform_red_refine(build_square_mesh(8.0, 8));
  const Mesh unit = uniform_red_refine(build_square_mesh(0.5, 8, Point(0.5, 0.5)));
  const Mesh skew = nvb_refine(build_square_mesh(0.5, 3, Point(0.5, 0.5)), std::vector<int>{0, 3, 4});
  for (const Potential& V : {Potential::harmonic(), Potential::lattice()}) {
    const auto mean = V.pi0(square);
    const auto sup = V.elementwise_sup(square);
    for (int t = 0; t < square.num_triangles(); ++t) EXPECT_LE(mean[t], sup[t] + 1e-12) << V.name();
  }
  const Potential A = Potential::anderson(3);
  for (const Mesh* m : {&unit, &skew}) {
    const auto mean = A.pi0(*m);
    const auto sup = A.elementwise_sup(*m);
    for (int t = 0; t < m->num_triangles(); ++t) EXPECT_LE(mean[t], sup[t] + 1e-9);
  }
}

TEST(Lattice, ShiftAndSupBound) {
  const Potential V = Potential::lattice();
  EXPECT_DOUBLE_EQ(V.offset(), 20.0);
  // sin(pi x1/2) sin(pi x2/2) = -1 at (1, -1): the shifted minimum is zero.
  EXPECT_NEAR(V(Point(1, -1)), 0.0, 1e-12);
  EXPECT_NEAR(V(Point(1, 1)) + V.offset(), 40.0, 1e-12);
  const Mesh mesh = build_square_mesh(8.0, 8);
  const auto sup = V.elementwise_sup(mesh);
  EXPECT_GE(*std::max_element(sup.begin(), sup.end()) + V.offset(), 88.0);
  // The bound dominates point samples.
  const Mesh fine = uniform_red_refine(mesh);
  const auto fine_sup = V.elementwise_sup(fine);
  for (int t = 0; t < fine.num_triangles(); ++t)
    for (double a : {0.1, 0.3, 0.6})
      for (double b : {0.1, 0.3}) {
        const auto& tri = fine.triangle(t);
        const Point x = (1 - a - b) * fine.vertex(tri[0]) + a * fine.vertex(tri[1]) + b * fine.vertex(tri[2]);
        EXPECT_LE(V(x), fine_sup[t] + 1e-12);
      }
}

TEST(Anderson, DeterministicAndNormalised) {
  const Potential a = Potential::anderson(42);
  const Potential b = Potential::anderson(42);
  const Potential c = Potential::anderson(43);
  EXPECT_EQ(a.cell_values(), b.cell_values());
  EXPECT_NE(a.cell_values(), c.cell_values());
  ASSERT_EQ(a.cell_values().size(), 64u);
  for (double v : a.cell_values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 9999.0);
    EXPECT_EQ(v, std::floor(v));
  }
  EXPECT_EQ(a.offset(), *std::min_element(a.cell_values().begin(), a.cell_values().end()));
  const Mesh mesh = build_square_mesh(0.5, 8, Point(0.5, 0.5));
  const auto sup = a.elementwise_sup(mesh);
  EXPECT_EQ(*std::min_element(sup.begin(), sup.end()), 0.0);
  EXPECT_LE(*std::max_element(sup.begin(), sup.end()) + a.offset(), 9999.0);
}

TEST(Anderson, CellValueInsideCell) {
  const Potential V = Potential::anderson(5);
  const Mesh mesh = uniform_red_refine(build_square_mesh(0.5, 8, Point(0.5, 0.5)));
  EXPECT_TRUE(V.is_piecewise_constant_on(mesh));
  const auto mean = V.pi0(mesh);
  for (int t = 0; t < mesh.num_triangles(); ++t) EXPECT_DOUBLE_EQ(mean[t], V(mesh.centroid(t)));
}

TEST(Anderson, StraddlingTriangleAveragesCells) {
  const Potential V = Potential::anderson(9);
  // One triangle covering the lower-left 2x2 cells exactly in half.
  const Mesh mesh({Point(0, 0), Point(0.25, 0), Point(0, 0.25)}, {{0, 1, 2}}, {0});
  EXPECT_FALSE(V.is_piecewise_constant_on(mesh));
  const auto& c = V.cell_values();
  // Cells (0,0) fully, (1,0) and (0,1) half each: areas 1/64, 1/128, 1/128 of total 1/32.
  const double expected = (c[0] * 2 + c[1] + c[8]) / 4.0 - V.offset();
  EXPECT_NEAR(V.pi0(mesh)[0], expected, 1e-9);
  EXPECT_EQ(V.elementwise_sup(mesh)[0], std::max({c[0], c[1], c[8]}) - V.offset());
}

TEST(PiecewiseConstant, FollowsRefinement) {
  const Mesh source = build_square_mesh(1.0, 2);
  std::vector<double> values(source.num_triangles());
  for (int t = 0; t < source.num_triangles(); ++t) values[t] = 3.0 + t;
  const Potential V = Potential::piecewise_constant(source, values);
  EXPECT_DOUBLE_EQ(V.offset(), 3.0);
  const Mesh fine = uniform_red_refine(source);
  const auto mean = V.pi0(fine);
  for (int t = 0; t < fine.num_triangles(); ++t) EXPECT_DOUBLE_EQ(mean[t], values[t / 4] - 3.0);
}

TEST(Zero, AllZeros) {
  const Mesh mesh = build_square_mesh(1.0, 2);
  for (double v : Potential::zero().pi0(mesh)) EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(Potential::zero().is_piecewise_constant_on(mesh));
}

}  // namespace
}  // namespace eigenbox
