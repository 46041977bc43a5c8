#pragma once

#include "eigenbox/assembly.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace eigenbox {

/// Smallest finite eigenpairs of a pencil, eigenvectors B-orthonormal.
struct Spectrum {
  std::vector<double> eigenvalues;
  Eigen::MatrixXd eigenvectors;
  /// Number of infinite eigenvalues of the full pencil (dim ker B).
  int n_infinite = 0;
};

struct EigenOptions {
  /// Pencils up to this size are solved densely.
  int dense_threshold = 300;
  /// Relative residual |A x - lambda B x| / |A x| accepted by the iteration.
  double tolerance = 1e-10;
  std::uint64_t seed = 20240607;
  int max_restarts = 300;
  /// Force the iterative solver regardless of size.
  bool force_iterative = false;
};

/// Smallest k finite eigenvalues of A x = lambda B x with A SPD and B PSD.
Spectrum solve_generalized(const MatrixPair& pair, int k, const EigenOptions& options = {});

/// Same for a bare pencil; `rank_B` < 0 means unknown, which restricts the
/// problem to the dense solver.
Spectrum solve_generalized(const SparseMatrix& A, const SparseMatrix& B, int k, int rank_B = -1,
                           const EigenOptions& options = {});

/// Dense solve of the whole pencil through the reciprocal problem
/// B y = mu A y; returns every finite eigenvalue.
Spectrum solve_dense(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

}  // namespace eigenbox
