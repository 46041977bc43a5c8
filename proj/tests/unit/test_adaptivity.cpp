#include "eigenbox/adaptivity.hpp"
#include "eigenbox/assembly.hpp"
#include "eigenbox/eigensolve.hpp"
#include "eigenbox/spaces.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace eigenbox {
namespace {

Mesh unit_square(int n) { return build_square_mesh(0.5, n, Point(0.5, 0.5)); }

// Edge jumps from vertex values: u is affine on each triangle, so the
// tangential derivative is the difference quotient along the edge.
std::vector<double> jump_oracle(const Mesh& mesh, const Eigen::VectorXd& u, bool boundary) {
  const DofSpace cr(mesh, SpaceKind::CR);
  auto value_at = [&](int t, int v) {
    Eigen::Vector3d bary = Eigen::Vector3d::Zero();
    for (int i = 0; i < 3; ++i)
      if (mesh.triangle(t)[i] == v) bary[i] = 1.0;
    return cr.evaluate(t, u, bary);
  };
  std::vector<double> eta2(mesh.num_triangles(), 0.0);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    if (edge.on_boundary() && !boundary) continue;
    const int a = edge.vertices[0], b = edge.vertices[1];
    const double len = mesh.edge_length(e);
    double jump = (value_at(edge.triangles[0], b) - value_at(edge.triangles[0], a)) / len;
    if (!edge.on_boundary()) jump -= (value_at(edge.triangles[1], b) - value_at(edge.triangles[1], a)) / len;
    for (int t : edge.triangles)
      if (t >= 0) eta2[t] += std::sqrt(mesh.area(t)) * len * jump * jump;
  }
  return eta2;
}

TEST(Estimator, AffineFunctionHasNoInteriorJumps) {
  // Boundary dofs are zero, so u is affine only on triangles away from the
  // boundary; their jump contributions vanish.
  const Mesh mesh = unit_square(8);
  const Eigen::VectorXd u = interpolate_cr(mesh, [](const Point& x) { return 2.0 * x.x() - 3.0 * x.y() + 1.0; });
  EstimatorOptions interior;
  interior.include_boundary = false;
  const EstimatorReport r = estimate(mesh, Potential::zero(), 0.0, u, interior);
  auto touches_boundary = [&](int t) {
    for (int e : mesh.triangle_edges(t))
      if (mesh.is_boundary_edge(e)) return true;
    return false;
  };
  int checked = 0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    bool far = !touches_boundary(t);
    for (int e : mesh.triangle_edges(t))
      for (int s : mesh.edge(e).triangles)
        if (s >= 0 && touches_boundary(s)) far = false;
    if (!far) continue;
    EXPECT_NEAR(r.eta2[t], 0.0, 1e-24);
    ++checked;
  }
  EXPECT_GT(checked, 20);
  EXPECT_GT(r.total, 0.0);
}

TEST(Estimator, RandomCrFunctionMatchesOracle) {
  const Mesh mesh = uniform_red_refine(build_lshape_mesh(1.0, 4));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd u(DofSpace(mesh, SpaceKind::CR).size());
  for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = dist(rng);
  for (bool boundary : {true, false}) {
    EstimatorOptions options;
    options.include_boundary = boundary;
    const EstimatorReport r = estimate(mesh, Potential::zero(), 0.0, u, options);
    const std::vector<double> oracle = jump_oracle(mesh, u, boundary);
    double total = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      EXPECT_NEAR(r.eta2[t], oracle[t], 1e-12 * (1 + oracle[t]));
      total += oracle[t];
    }
    EXPECT_NEAR(r.total, total, 1e-11 * total);
  }
}

TEST(Estimator, VolumeTermOfConstantResidual) {
  // Single interior edge: u = psi_e, V = 0, lambda = 1. The volume term is
  // |T|^2 times the mean square of psi_e, which is 1/3 on each triangle.
  const Mesh mesh = unit_square(1);
  ASSERT_EQ(mesh.num_interior_edges(), 1);
  EstimatorOptions interior;
  interior.include_boundary = false;
  const EstimatorReport r = estimate(mesh, Potential::zero(), 1.0, Eigen::VectorXd::Ones(1), interior);
  for (int t = 0; t < 2; ++t) EXPECT_NEAR(r.eta2[t], 0.25 / 3.0, 1e-14);
}

TEST(Doerfler, MinimalPrefix) {
  EXPECT_EQ(doerfler_mark({4, 3, 2, 1}, 0.5), (std::vector<int>{0, 1}));
  EXPECT_EQ(doerfler_mark({1, 2, 3, 4}, 0.5), (std::vector<int>{3, 2}));
  EXPECT_EQ(doerfler_mark({4, 3, 2, 1}, 0.4), (std::vector<int>{0}));
  EXPECT_EQ(doerfler_mark({4, 3, 2, 1}, 0.41), (std::vector<int>{0, 1}));
}

TEST(Doerfler, TiesKeepIndexOrder) {
  EXPECT_EQ(doerfler_mark({1, 1, 1, 1}, 0.5), (std::vector<int>{0, 1}));
  EXPECT_EQ(doerfler_mark({2, 5, 5, 1}, 0.3), (std::vector<int>{1}));
  EXPECT_EQ(doerfler_mark({2, 5, 5, 1}, 0.4), (std::vector<int>{1, 2}));
}

TEST(Doerfler, ThetaOneAndInvalid) {
  EXPECT_EQ(doerfler_mark({0, 1, 0}, 1.0), (std::vector<int>{0, 1, 2}));
  EXPECT_THROW(doerfler_mark({1, 2}, 0.0), std::invalid_argument);
  EXPECT_THROW(doerfler_mark({1, 2}, 1.5), std::invalid_argument);
}

TEST(Estimator, ConcentratesAtReentrantCorner) {
  const Mesh mesh = uniform_red_refine(uniform_red_refine(build_lshape_mesh(1.0, 4)));
  const Spectrum s = solve_generalized(assemble(Method::CR, mesh, Potential::zero()), 1);
  EstimatorOptions interior;
  interior.include_boundary = false;
  const EstimatorReport r = estimate(mesh, Potential::zero(), s.eigenvalues[0], s.eigenvectors.col(0), interior);
  const int worst = static_cast<int>(std::max_element(r.eta2.begin(), r.eta2.end()) - r.eta2.begin());
  bool touches = false;
  for (int v : mesh.triangle(worst)) touches |= mesh.vertex(v).norm() < 1e-12;
  EXPECT_TRUE(touches);
}

}  // namespace
}  // namespace eigenbox
