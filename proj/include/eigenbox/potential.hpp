#pragma once

#include "eigenbox/mesh.hpp"

#include <Eigen/Geometry>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace eigenbox {

enum class PotentialKind { zero, harmonic, lattice, anderson, piecewise_constant };

/// Scalar potential V >= 0 with essential infimum zero.
///
/// Potentials whose infimum is positive are stored shifted; `offset()` is the
/// amount removed, and eigenvalues of the original operator are those of the
/// stored one plus the offset.
class Potential {
 public:
  static Potential zero();
  /// |x|^2 / 2.
  static Potential harmonic();
  /// (|x|^2/2 - 16)_+ + floor(30 + 10 sin(pi x1 / 2) sin(pi x2 / 2)), offset 20.
  static Potential lattice();
  /// `grid` x `grid` cells of `box`, integer values uniform on 0..9999.
  static Potential anderson(std::uint64_t seed, int grid = 8,
                            const Eigen::AlignedBox2d& box = Eigen::AlignedBox2d(Point(0, 0), Point(1, 1)));
  /// One value per triangle of `source`; meshes passed to the queries must be
  /// refinements of `source`.
  static Potential piecewise_constant(const Mesh& source, std::vector<double> values);

  PotentialKind kind() const { return kind_; }
  std::string name() const;
  double offset() const { return offset_; }

  /// Shifted value at a point.
  double operator()(const Point& x) const;

  /// True when V is constant on every triangle of `mesh`.
  bool is_piecewise_constant_on(const Mesh& mesh) const;

  /// Triangle means of V.
  std::vector<double> pi0(const Mesh& mesh) const;
  /// Per-triangle upper bounds of V.
  std::vector<double> elementwise_sup(const Mesh& mesh) const;

  /// Anderson cell values before the shift, row-major with x fastest.
  const std::vector<double>& cell_values() const { return cells_; }
  int grid() const { return grid_; }
  std::uint64_t seed() const { return seed_; }

 private:
  struct Source;

  int anderson_cell(const Point& x) const;
  int locate(const Point& x) const;

  PotentialKind kind_ = PotentialKind::zero;
  double offset_ = 0.0;
  std::uint64_t seed_ = 0;
  int grid_ = 0;
  Eigen::AlignedBox2d box_;
  std::vector<double> cells_;
  std::shared_ptr<const Source> source_;
};

/// Area of the intersection of triangle `t` of `mesh` with an axis-aligned box.
double clipped_area(const Mesh& mesh, int t, const Eigen::AlignedBox2d& box);

}  // namespace eigenbox
