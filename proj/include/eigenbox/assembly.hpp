#pragma once

#include "eigenbox/mesh.hpp"
#include "eigenbox/potential.hpp"
#include "eigenbox/spaces.hpp"

#include <Eigen/SparseCore>

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace eigenbox {

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class Method { CR, eCR, mCR, RT, sCR, S1 };

std::string to_string(Method method);
Method parse_method(const std::string& name);
SpaceKind space_of(Method method);
/// mCR, RT and sCR need a potential that is constant on each triangle.
bool needs_piecewise_constant(Method method);

/// Block data of the sCR pencil that lets A be solved through the mCR matrix:
/// A = [S, -S C; -C^T S, K + C^T S C] with S block diagonal.
struct CondensedSystem {
  SparseMatrix K;
  SparseMatrix C;
  SparseMatrix S;
  SparseMatrix S_inv;
};

struct MatrixPair {
  SparseMatrix A;
  SparseMatrix B;
  Method method = Method::CR;
  SpaceKind space = SpaceKind::CR;
  /// Number of finite eigenvalues of the pencil.
  int rank_B = 0;
  std::shared_ptr<const CondensedSystem> condensed;
};

struct AssemblyOptions {
  /// Per-triangle diffusion coefficient; empty means one.
  std::vector<double> alpha;
  /// Replace V by its triangle means for every method.
  bool project_potential = false;
  /// Exactness degree of the rule for potential terms.
  int quadrature_degree = 10;
  double kappa_ecr = 0.149;
};

/// Matrix pair of the discrete eigenvalue problem of `method`.
MatrixPair assemble(Method method, const Mesh& mesh, const Potential& V, const AssemblyOptions& options = {});

/// Conforming Courant pair.
MatrixPair assemble_courant(const Mesh& mesh, const Potential& V, const AssemblyOptions& options = {});

/// Stiffness plus potential and mass matrices of a conforming space (S1 or
/// S2) with the potential integrated by quadrature.
MatrixPair assemble_conforming(SpaceKind space, const Mesh& mesh, const Potential& V,
                               const AssemblyOptions& options = {});

/// Embedding of eCR into Vpw.
SparseMatrix ecr_to_vpw(const Mesh& mesh);

/// Piecewise stiffness and mass of a scalar space.
SparseMatrix stiffness_matrix(const DofSpace& space, const std::vector<double>& alpha = {});
SparseMatrix mass_matrix(const DofSpace& space);

/// "row col value" per stored entry, one-based, 17 significant digits.
void write_coordinate(std::ostream& out, const SparseMatrix& m);

}  // namespace eigenbox
