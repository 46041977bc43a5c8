#include "eigenbox/assembly.hpp"
#include "eigenbox/eigensolve.hpp"
#include "eigenbox/quadrature.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

namespace eigenbox {
namespace {

double asymmetry(const SparseMatrix& m) { return SparseMatrix(m - SparseMatrix(m.transpose())).norm(); }

int rank_of(const SparseMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig{Eigen::MatrixXd(m)};
  const double top = eig.eigenvalues().cwiseAbs().maxCoeff();
  return static_cast<int>((eig.eigenvalues().array() > 1e-12 * top).count());
}

TEST(Assembly, AllPairsSymmetric) {
  const Mesh mesh = build_square_mesh(8.0, 4);
  for (Method m : {Method::CR, Method::eCR, Method::mCR, Method::RT, Method::sCR, Method::S1}) {
    AssemblyOptions options;
    options.project_potential = needs_piecewise_constant(m);
    const MatrixPair pair = assemble(m, mesh, Potential::harmonic(), options);
    EXPECT_EQ(asymmetry(pair.A), 0.0) << to_string(m);
    EXPECT_EQ(asymmetry(pair.B), 0.0) << to_string(m);
    EXPECT_EQ(pair.method, m);
  }
}

TEST(Assembly, CrOnTwoTriangles) {
  // One interior edge, the diagonal: a = 2 * 4 |T| |grad lambda|^2 = 8,
  // b = 2 |T| / 3 = 1/3.
  const Mesh mesh = build_square_mesh(0.5, 1, Point(0.5, 0.5));
  const MatrixPair pair = assemble(Method::CR, mesh, Potential::zero());
  ASSERT_EQ(pair.A.rows(), 1);
  EXPECT_NEAR(pair.A.coeff(0, 0), 8.0, 1e-14);
  EXPECT_NEAR(pair.B.coeff(0, 0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(solve_generalized(pair, 1).eigenvalues[0], 24.0, 1e-12);
}

TEST(Assembly, McrPotentialIsScaledMeanProduct) {
  const Mesh mesh = build_square_mesh(1.0, 2);
  std::vector<double> values(mesh.num_triangles(), 5.0);
  values[0] = 0.0;  // keep the minimum at zero so the stored potential is not shifted
  const Potential V = Potential::piecewise_constant(mesh, values);
  const MatrixPair with = assemble(Method::mCR, mesh, V);
  const MatrixPair without = assemble(Method::mCR, mesh, Potential::zero());
  const MatrixPair rt = assemble(Method::RT, mesh, Potential::zero());
  Eigen::MatrixXd diff = Eigen::MatrixXd(with.A - without.A);
  Eigen::MatrixXd manual = Eigen::MatrixXd::Zero(diff.rows(), diff.cols());
  const DofSpace ecr(mesh, SpaceKind::eCR);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const LocalBasis b = ecr.local_basis(t);
    for (int i = 0; i < b.size; ++i)
      for (int j = 0; j < b.size; ++j)
        if (b.dofs[i] >= 0 && b.dofs[j] >= 0)
          manual(b.dofs[i], b.dofs[j]) += values[t] * mesh.area(t) * form_mean(b.forms[i]) * form_mean(b.forms[j]);
  }
  EXPECT_LE((diff - manual).norm(), 1e-12);
  EXPECT_EQ(rank_of(rt.B), mesh.num_triangles());
  EXPECT_EQ(rt.rank_B, mesh.num_triangles());
}

TEST(Assembly, ConstantPotentialGivesScaledMean) {
  // With V = c on every triangle the mCR potential term is c times the
  // RT mass. A one-triangle source with value c covers the whole square.
  const Mesh mesh = build_square_mesh(1.0, 2);
  const Mesh with_zero({Point(-1, -1), Point(1, -1), Point(1, 1), Point(-1, 1), Point(5, 5), Point(6, 5), Point(5, 6)},
                       {{0, 1, 2}, {0, 2, 3}, {4, 5, 6}}, {1, 2, 0});
  const Potential V = Potential::piecewise_constant(with_zero, {3.0, 3.0, 0.0});
  const SparseMatrix diff = assemble(Method::mCR, mesh, V).A - assemble(Method::mCR, mesh, Potential::zero()).A;
  const SparseMatrix expected = 3.0 * assemble(Method::RT, mesh, Potential::zero()).B;
  EXPECT_LE(SparseMatrix(diff - expected).norm(), 1e-12);
}

TEST(Assembly, ScrStructure) {
  const Mesh mesh = build_square_mesh(1.0, 2);
  const MatrixPair pair = assemble(Method::sCR, mesh, Potential::zero());
  const int nt = mesh.num_triangles();
  const int necr = DofSpace(mesh, SpaceKind::eCR).size();
  ASSERT_EQ(pair.A.rows(), 4 * nt + necr);
  EXPECT_EQ(pair.rank_B, 4 * nt);
  EXPECT_EQ(rank_of(pair.B), 4 * nt);
  ASSERT_TRUE(pair.condensed);
  // A is positive definite.
  Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(pair.A)};
  EXPECT_EQ(llt.info(), Eigen::Success);
  // The embedding reproduces eCR functions on every triangle.
  const DofSpace ecr(mesh, SpaceKind::eCR), vpw(mesh, SpaceKind::Vpw);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1, 1);
  Eigen::VectorXd v(necr);
  for (int i = 0; i < necr; ++i) v[i] = dist(rng);
  const Eigen::VectorXd w = pair.condensed->C * v;
  for (int t = 0; t < nt; ++t)
    EXPECT_LE((ecr.restrict_to(t, v) - vpw.restrict_to(t, w)).norm(), 1e-13);
}

TEST(Assembly, RejectsNonConstantPotential) {
  const Mesh mesh = build_square_mesh(8.0, 2);
  for (Method m : {Method::mCR, Method::RT, Method::sCR})
    EXPECT_THROW(assemble(m, mesh, Potential::harmonic()), std::invalid_argument);
  EXPECT_NO_THROW(assemble(Method::CR, mesh, Potential::harmonic()));
  const Mesh unit = build_square_mesh(0.5, 8, Point(0.5, 0.5));
  EXPECT_NO_THROW(assemble(Method::RT, unit, Potential::anderson(1)));
}

TEST(Assembly, QuadraturePotentialMatchesHighOrderReference) {
  const Mesh mesh = build_square_mesh(8.0, 2);
  const MatrixPair pair = assemble_courant(mesh, Potential::harmonic());
  const DofSpace s1(mesh, SpaceKind::S1);
  const SparseMatrix vmass = pair.A - stiffness_matrix(s1);
  Eigen::MatrixXd reference = Eigen::MatrixXd::Zero(s1.size(), s1.size());
  const QuadratureRule& rule = triangle_rule(20);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const LocalGeometry g = local_geometry(mesh, t);
    const LocalBasis b = s1.local_basis(t);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const Eigen::Vector3d& l = rule.points[q];
      const Point x = l[0] * g.vertices[0] + l[1] * g.vertices[1] + l[2] * g.vertices[2];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (b.dofs[i] >= 0 && b.dofs[j] >= 0)
            reference(b.dofs[i], b.dofs[j]) += g.area * rule.weights[q] * 0.5 * x.squaredNorm() * l[i] * l[j];
    }
  }
  EXPECT_LE((Eigen::MatrixXd(vmass) - reference).norm(), 1e-11 * reference.norm());
}

TEST(Assembly, CourantEigenvalueIsUpperBound) {
  const Mesh mesh = uniform_red_refine(build_square_mesh(0.5, 8, Point(0.5, 0.5)));
  const Spectrum s = solve_generalized(assemble_courant(mesh, Potential::zero()), 1);
  EXPECT_GE(s.eigenvalues[0], 2 * M_PI * M_PI);
}

TEST(Assembly, ConstantPotentialShiftsCourantSpectrum) {
  // A source mesh far away carries the zero minimum so V = 2 on the square.
  const Mesh mesh = build_square_mesh(0.5, 4, Point(0.5, 0.5));
  const Mesh source({Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1), Point(5, 5), Point(6, 5), Point(5, 6)},
                    {{0, 1, 2}, {0, 2, 3}, {4, 5, 6}}, {1, 2, 0});
  const Potential V = Potential::piecewise_constant(source, {2.0, 2.0, 0.0});
  const Spectrum with = solve_generalized(assemble_courant(mesh, V), 3);
  const Spectrum without = solve_generalized(assemble_courant(mesh, Potential::zero()), 3);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(with.eigenvalues[j], without.eigenvalues[j] + 2.0, 1e-10);
}

TEST(Assembly, RtSpectrumMatchesIndependentOracle) {
  const Mesh mesh = build_square_mesh(8.0, 4);
  AssemblyOptions options;
  options.project_potential = true;
  const MatrixPair pair = assemble(Method::RT, mesh, Potential::harmonic(), options);
  const int nt = mesh.num_triangles();
  ASSERT_LE(nt, 64);
  // B = Pi^T D Pi with Pi the triangle means; finite eigenvalues are the
  // reciprocals of the eigenvalues of D^{1/2} Pi A^{-1} Pi^T D^{1/2}.
  const DofSpace ecr(mesh, SpaceKind::eCR);
  Eigen::MatrixXd Pi = Eigen::MatrixXd::Zero(nt, ecr.size());
  Eigen::VectorXd d(nt);
  for (int t = 0; t < nt; ++t) {
    const LocalBasis b = ecr.local_basis(t);
    for (int i = 0; i < b.size; ++i)
      if (b.dofs[i] >= 0) Pi(t, b.dofs[i]) = form_mean(b.forms[i]);
    d[t] = std::sqrt(mesh.area(t));
  }
  const Eigen::MatrixXd G = Pi * Eigen::FullPivLU<Eigen::MatrixXd>(Eigen::MatrixXd(pair.A)).solve(Pi.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(d.asDiagonal() * G * d.asDiagonal());
  std::vector<double> oracle;
  for (int i = nt - 1; i >= 0; --i) oracle.push_back(1.0 / eig.eigenvalues()[i]);

  const Spectrum s = solve_generalized(pair, nt);
  EXPECT_EQ(s.n_infinite, ecr.size() - nt);
  for (int j = 0; j < nt; ++j) EXPECT_NEAR(s.eigenvalues[j], oracle[j], 1e-9 * oracle[j]);

  // Reordering the basis leaves the spectrum unchanged.
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(ecr.size());
  perm.setIdentity();
  std::mt19937_64 rng(5);
  std::shuffle(perm.indices().data(), perm.indices().data() + ecr.size(), rng);
  const SparseMatrix A2 = perm * pair.A * perm.transpose();
  const SparseMatrix B2 = perm * pair.B * perm.transpose();
  const Spectrum s2 = solve_generalized(A2, B2, nt);
  for (int j = 0; j < nt; ++j) EXPECT_NEAR(s2.eigenvalues[j], s.eigenvalues[j], 1e-9 * s.eigenvalues[j]);
}

TEST(Assembly, CoordinateDump) {
  SparseMatrix m(2, 2);
  m.insert(0, 0) = 1.0 / 3.0;
  m.insert(1, 0) = 2.0;
  std::ostringstream out;
  write_coordinate(out, m);
  EXPECT_EQ(out.str(), "1 1 0.33333333333333331\n2 1 2\n");
}

}  // namespace
}  // namespace eigenbox
