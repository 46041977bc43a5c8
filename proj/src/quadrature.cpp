#include "eigenbox/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <stdexcept>

namespace eigenbox {

namespace {

constexpr int kMaxLinePoints = 32;
constexpr int kMaxTriangleDegree = 30;

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
// Legendre recurrence, weights the squared first eigenvector components.
LineRule make_gauss_legendre(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double beta = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = beta;
    jacobi(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  LineRule rule;
  for (int i = 0; i < n; ++i) {
    rule.points.push_back(0.5 * (eig.eigenvalues()(i) + 1.0));
    const double v0 = eig.eigenvectors()(0, i);
    rule.weights.push_back(v0 * v0);
  }
  return rule;
}

// Collapsed tensor rule: x = u, y = v (1 - u) maps the unit square onto the
// reference triangle with Jacobian 1 - u, which raises the degree in u by one.
QuadratureRule make_triangle_rule(int degree) {
  const int n = (degree + 3) / 2;
  const LineRule& line = gauss_legendre(n);
  QuadratureRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = line.points[i];
      const double v = line.points[j];
      const double x = u;
      const double y = v * (1.0 - u);
      rule.points.emplace_back(1.0 - x - y, x, y);
      rule.weights.push_back(2.0 * line.weights[i] * line.weights[j] * (1.0 - u));
    }
  return rule;
}

}  // namespace

const LineRule& gauss_legendre(int n) {
  static const std::array<LineRule, kMaxLinePoints + 1> rules = [] {
    std::array<LineRule, kMaxLinePoints + 1> all;
    for (int i = 1; i <= kMaxLinePoints; ++i) all[i] = make_gauss_legendre(i);
    return all;
  }();
  if (n < 1 || n > kMaxLinePoints) throw std::out_of_range("gauss_legendre: 1 <= n <= 32");
  return rules[n];
}

const QuadratureRule& triangle_rule(int degree) {
  static const std::array<QuadratureRule, kMaxTriangleDegree + 1> rules = [] {
    std::array<QuadratureRule, kMaxTriangleDegree + 1> all;
    for (int d = 0; d <= kMaxTriangleDegree; ++d) all[d] = make_triangle_rule(d);
    return all;
  }();
  if (degree < 0 || degree > kMaxTriangleDegree)
    throw std::out_of_range("triangle_rule: 0 <= degree <= 30");
  return rules[degree];
}

}  // namespace eigenbox
