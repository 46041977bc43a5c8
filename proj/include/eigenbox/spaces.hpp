#pragma once

#include "eigenbox/mesh.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <string>
#include <utility>

namespace eigenbox {

/// A polynomial of degree <= 2 on a triangle, written as lambda^T Q lambda in
/// the barycentric coordinates lambda of that triangle. Constants and affine
/// functions fit because the coordinates sum to one.
using QuadForm = Eigen::Matrix3d;

struct LocalGeometry {
  double area = 0.0;
  std::array<Point, 3> vertices;
  /// Row i is the gradient of lambda_i.
  Eigen::Matrix<double, 3, 2> grad;
  /// grad lambda_i . grad lambda_j
  Eigen::Matrix3d gram;
};

LocalGeometry local_geometry(const Mesh& mesh, int t);

double form_value(const QuadForm& q, const Eigen::Vector3d& bary);
Eigen::Vector2d form_gradient(const QuadForm& q, const Eigen::Vector3d& bary, const LocalGeometry& g);
/// Mean value over the triangle.
double form_mean(const QuadForm& q);
/// Integral of p q over the triangle.
double form_l2(const QuadForm& p, const QuadForm& q, const LocalGeometry& g);
/// Integral of grad p . grad q over the triangle.
double form_energy(const QuadForm& p, const QuadForm& q, const LocalGeometry& g);

QuadForm form_constant(double c);
QuadForm form_barycentric(int i);
/// 1 - 2 lambda_e; equals 1 on edge e and vanishes at the midpoints of the others.
QuadForm form_cr(int e);
QuadForm form_bubble(const LocalGeometry& g);
/// Nodal P2 basis: vertex i (0..2) or midpoint of edge i - 3 (3..5).
QuadForm form_p2(int i);

/// Coefficient c of the bubble 2 - c |x - mid(T)|^2.
double bubble_constant(const LocalGeometry& g);

enum class SpaceKind { CR, eCR, S1, S2, Vpw, Ves };

std::string to_string(SpaceKind kind);

/// Degrees of freedom restricted to one triangle. Dirichlet-constrained dofs
/// have index -1.
struct LocalBasis {
  int size = 0;
  std::array<int, 6> dofs{};
  std::array<QuadForm, 6> forms;
};

/// Degree-of-freedom layout of a finite element space on a fixed mesh.
///
/// CR: one dof per interior edge. eCR: the CR dofs followed by one bubble per
/// triangle. S1: interior vertices. S2: interior vertices followed by interior
/// edges. Vpw: 4t..4t+3 are the vertex values and the bubble on triangle t.
/// Ves: the Vpw block followed by the eCR block.
///
/// The mesh must outlive the space.
class DofSpace {
 public:
  DofSpace(const Mesh& mesh, SpaceKind kind);

  SpaceKind kind() const { return kind_; }
  const Mesh& mesh() const { return *mesh_; }
  int size() const { return size_; }

  int edge_dof(int e) const { return edge_dof_[e]; }
  int vertex_dof(int v) const { return vertex_dof_[v]; }
  int bubble_dof(int t) const;
  /// Offset of the eCR block inside Ves.
  int nc_offset() const { return 4 * mesh_->num_triangles(); }

  /// Local basis of triangle t. Not available for Ves.
  LocalBasis local_basis(int t) const;
  /// Restriction of a finite element function to triangle t.
  QuadForm restrict_to(int t, const Eigen::VectorXd& coeffs) const;
  double evaluate(int t, const Eigen::VectorXd& coeffs, const Eigen::Vector3d& bary) const;

 private:
  const Mesh* mesh_;
  SpaceKind kind_;
  int size_ = 0;
  int num_edge_dofs_ = 0;
  int num_vertex_dofs_ = 0;
  std::vector<int> edge_dof_;
  std::vector<int> vertex_dof_;
};

/// Edge means of f on interior edges, by Gauss-Legendre with `points` nodes.
Eigen::VectorXd interpolate_cr(const Mesh& mesh, const std::function<double(const Point&)>& f, int points = 8);
/// Edge means of a finite element function of `from`.
Eigen::VectorXd interpolate_cr(const DofSpace& from, const Eigen::VectorXd& v);
/// Keeps edge means and triangle means of a finite element function.
Eigen::VectorXd interpolate_ecr(const DofSpace& from, const Eigen::VectorXd& v);

/// Vertex values averaged over the patch, zero on the boundary (S1 result).
Eigen::VectorXd average_a1(const DofSpace& cr, const Eigen::VectorXd& v);
/// A1 at vertices plus CR midpoint values (S2 result).
Eigen::VectorXd average_a2(const DofSpace& cr, const Eigen::VectorXd& v);
/// A1 applied to the CR interpolation of an eCR function (S1 result).
Eigen::VectorXd average_ecr(const DofSpace& ecr, const Eigen::VectorXd& v);
/// Splits eCR coefficients into the CR part and the bubble part.
std::pair<Eigen::VectorXd, Eigen::VectorXd> decompose_ecr(const DofSpace& ecr, const Eigen::VectorXd& v);

}  // namespace eigenbox
