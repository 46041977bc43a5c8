#pragma once

#include <Eigen/Core>

#include <vector>

namespace eigenbox {

/// Quadrature on a triangle in barycentric coordinates. Weights sum to one,
/// so the integral over T is |T| times the weighted sum.
struct QuadratureRule {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Gauss-Legendre rule on [0, 1] with `n` points; weights sum to one.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Rule exact for all polynomials of total degree <= `degree` (0..30).
const QuadratureRule& triangle_rule(int degree);

/// Rule exact for polynomials of degree <= 2n - 1 on [0, 1].
const LineRule& gauss_legendre(int n);

}  // namespace eigenbox
