#pragma once

#include "eigenbox/mesh.hpp"
#include "eigenbox/potential.hpp"

#include <Eigen/Core>

#include <vector>

namespace eigenbox {

struct EstimatorOptions {
  /// Count the trace of u on boundary edges as a jump.
  bool include_boundary = true;
  /// Use triangle means of V in the volume term.
  bool project_potential = false;
  int quadrature_degree = 10;
};

struct EstimatorReport {
  std::vector<double> eta2;
  double total = 0.0;
};

/// eta^2(T) = |T| |(lambda - V) u|^2_{L2(T)} + |T|^{1/2} sum_F |F| [du/ds]_F^2
/// for a CR function u (coefficients on interior edges).
EstimatorReport estimate(const Mesh& mesh, const Potential& V, double lambda, const Eigen::VectorXd& u_cr,
                         const EstimatorOptions& options = {});

/// Smallest prefix of the triangles sorted by decreasing eta^2 (ties by
/// index) whose sum reaches theta times the total.
std::vector<int> doerfler_mark(const std::vector<double>& eta2, double theta);

}  // namespace eigenbox
