#pragma once

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace eigenbox {

using Point = Eigen::Vector2d;

/// An edge of the triangulation. `triangles[0]` is the triangle T+ whose outer
/// normal coincides with the stored edge normal; `triangles[1]` is T- or -1 on
/// the boundary.
struct Edge {
  std::array<int, 2> vertices;
  std::array<int, 2> triangles;

  bool on_boundary() const { return triangles[1] < 0; }
};

/// Conforming triangulation of a polygonal domain in 2D.
///
/// Triangles are stored counterclockwise. Local edge `e` of a triangle is the
/// edge opposite local vertex `e`. Each triangle carries the local index of
/// its newest-vertex-bisection refinement edge. A mesh is immutable once
/// built; refinement returns a new mesh.
class Mesh {
 public:
  Mesh() = default;
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
       std::vector<int> refinement_edges, int level = 0);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_interior_edges() const { return num_interior_edges_; }
  int num_interior_vertices() const { return num_interior_vertices_; }
  int level() const { return level_; }

  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(int v) const { return vertices_[v]; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }
  /// Global edge indices of the three local edges of triangle `t`.
  const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  int refinement_edge(int t) const { return refinement_edges_[t]; }
  const std::vector<int>& refinement_edges() const { return refinement_edges_; }

  bool is_boundary_edge(int e) const { return edges_[e].on_boundary(); }
  bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }

  /// Global index of the edge joining vertices `a` and `b`, or -1.
  int find_edge(int a, int b) const;

  double area(int t) const;
  double diameter(int t) const;
  Point centroid(int t) const;
  Point edge_midpoint(int e) const;
  double edge_length(int e) const;
  /// Unit normal of fixed orientation; outward on boundary edges.
  Point edge_normal(int e) const { return normals_[e]; }
  /// Triangles containing vertex `v`.
  std::span<const int> patch(int v) const;

  double h_max() const;
  double total_area() const;
  double boundary_length() const;

 private:
  void build_topology();

  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<int> refinement_edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<Edge> edges_;
  std::vector<Point> normals_;
  std::vector<char> boundary_vertex_;
  std::vector<int> patch_offsets_;
  std::vector<int> patch_triangles_;
  int num_interior_edges_ = 0;
  int num_interior_vertices_ = 0;
  int level_ = 0;
};

/// (c - w, c + w)^2 split into n^2 subsquares, each cut along the diagonal
/// parallel to (1, 1). All triangles are right-isosceles; the hypotenuse is
/// the initial refinement edge.
Mesh build_square_mesh(double halfwidth, int n_per_side, const Point& center = Point::Zero());

/// (-w, w)^2 minus [0, w)^2 on the same grid; `n_per_side` must be even.
Mesh build_lshape_mesh(double halfwidth, int n_per_side);

/// Red refinement: every triangle is split into four similar children.
Mesh uniform_red_refine(const Mesh& mesh);

/// Newest-vertex bisection of the marked triangles plus closure.
Mesh nvb_refine(const Mesh& mesh, std::span<const int> marked);

/// Empty string when the mesh is a valid conforming triangulation, otherwise
/// a description of the first violation found.
std::string check_mesh(const Mesh& mesh);

void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

}  // namespace eigenbox
