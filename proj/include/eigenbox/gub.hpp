#pragma once

#include "eigenbox/assembly.hpp"
#include "eigenbox/spaces.hpp"

#include <Eigen/Core>

#include <vector>

namespace eigenbox {

enum class Averaging {
  /// Vertex means of a CR function (S1).
  A1,
  /// Vertex means and midpoint values of a CR function (S2).
  A2,
  /// A1 of the CR interpolation of an eCR function (S1).
  ECR,
  /// Input already conforming (S1).
  Identity,
};

struct GubResult {
  /// Ascending eigenvalues of the reduced pencil; mu[j] bounds lambda_{j+1} from above.
  std::vector<double> mu;
  int k_available = 0;
  /// The averaged family was numerically linearly dependent.
  bool degenerate = false;
};

SpaceKind averaged_space(Averaging avg);

/// Conforming images of the columns of U (coefficients of `method`'s space).
/// For sCR only the eCR component is averaged.
Eigen::MatrixXd average_eigenfunctions(Method method, const Mesh& mesh, const Eigen::MatrixXd& U, Averaging avg);

/// Rayleigh-Ritz on span of the columns of W; `conforming` is the matching S1
/// or S2 pair. Directions of the Gram matrix below 1e-12 times its largest
/// diagonal entry are discarded.
GubResult rayleigh_ritz(const MatrixPair& conforming, const Eigen::MatrixXd& W);

/// Upper bounds from the averaged eigenfunctions of `method`.
GubResult gub_from_averaging(Method method, const Mesh& mesh, const Potential& V, const Eigen::MatrixXd& U,
                             Averaging avg, const AssemblyOptions& options = {});

/// sqrt of the largest gamma in C x = gamma D x with
/// C_jl = (u_j - A u_j, u_l - A u_l)_{L2} and D = diag(lambda).
double alpha_k(Method method, const Mesh& mesh, const Eigen::MatrixXd& U, const std::vector<double>& lambda,
               Averaging avg);

/// True when alpha < lambda^{-1/2}, which guarantees that mu_k exists and
/// bounds lambda_k from above.
bool existence_check(double alpha, double lambda);

}  // namespace eigenbox
