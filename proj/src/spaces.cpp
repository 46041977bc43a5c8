#include "eigenbox/spaces.hpp"

#include "eigenbox/quadrature.hpp"

#include <algorithm>
#include <stdexcept>

namespace eigenbox {

namespace {

// Mean over the triangle of lambda_i lambda_j lambda_k lambda_l, from
// the integral of lambda^alpha = 2 |T| alpha! / (|alpha| + 2)!.
const std::array<double, 81>& quartic_means() {
  static const std::array<double, 81> table = [] {
    std::array<double, 81> out{};
    const int fact[5] = {1, 1, 2, 6, 24};
    for (int i = 0; i < 81; ++i) {
      int count[3] = {0, 0, 0};
      ++count[i % 3];
      ++count[(i / 3) % 3];
      ++count[(i / 9) % 3];
      ++count[i / 27];
      out[i] = 2.0 * fact[count[0]] * fact[count[1]] * fact[count[2]] / 720.0;
    }
    return out;
  }();
  return table;
}

// Mean of lambda_i lambda_j.
double quadratic_mean(int i, int j) { return i == j ? 1.0 / 6.0 : 1.0 / 12.0; }

}  // namespace

LocalGeometry local_geometry(const Mesh& mesh, int t) {
  LocalGeometry g;
  const auto& tri = mesh.triangle(t);
  for (int i = 0; i < 3; ++i) g.vertices[i] = mesh.vertex(tri[i]);
  g.area = mesh.area(t);
  for (int i = 0; i < 3; ++i) {
    const Point edge = g.vertices[(i + 2) % 3] - g.vertices[(i + 1) % 3];
    // Rotate the opposite edge inward and scale by its height.
    g.grad.row(i) = Eigen::RowVector2d(-edge.y(), edge.x()) / (2.0 * g.area);
  }
  g.gram = g.grad * g.grad.transpose();
  return g;
}

double form_value(const QuadForm& q, const Eigen::Vector3d& bary) { return bary.dot(q * bary); }

Eigen::Vector2d form_gradient(const QuadForm& q, const Eigen::Vector3d& bary, const LocalGeometry& g) {
  return 2.0 * g.grad.transpose() * (q * bary);
}

double form_mean(const QuadForm& q) {
  return (q.sum() + q.trace()) / 12.0;
}

double form_l2(const QuadForm& p, const QuadForm& q, const LocalGeometry& g) {
  const auto& table = quartic_means();
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (p(i, j) == 0.0) continue;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) s += p(i, j) * q(k, l) * table[i + 3 * j + 9 * k + 27 * l];
    }
  return g.area * s;
}

double form_energy(const QuadForm& p, const QuadForm& q, const LocalGeometry& g) {
  const Eigen::Matrix3d m = p.transpose() * g.gram * q;
  double s = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l) s += m(j, l) * quadratic_mean(j, l);
  return 4.0 * g.area * s;
}

QuadForm form_constant(double c) { return QuadForm::Constant(c); }

QuadForm form_barycentric(int i) {
  QuadForm q = QuadForm::Zero();
  q.row(i).array() += 0.5;
  q.col(i).array() += 0.5;
  return q;
}

QuadForm form_cr(int e) { return form_constant(1.0) - 2.0 * form_barycentric(e); }

double bubble_constant(const LocalGeometry& g) {
  double ordered = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) ordered += (g.vertices[i] - g.vertices[j]).squaredNorm();
  return 72.0 / ordered;
}

QuadForm form_bubble(const LocalGeometry& g) {
  const Point mid = (g.vertices[0] + g.vertices[1] + g.vertices[2]) / 3.0;
  const double c = bubble_constant(g);
  QuadForm q;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) q(i, j) = 2.0 - c * (g.vertices[i] - mid).dot(g.vertices[j] - mid);
  return q;
}

QuadForm form_p2(int i) {
  QuadForm q = QuadForm::Zero();
  if (i < 3) {
    q = -form_barycentric(i);
    q(i, i) += 2.0;
  } else {
    const int a = (i - 3 + 1) % 3;
    const int b = (i - 3 + 2) % 3;
    q(a, b) = q(b, a) = 2.0;
  }
  return q;
}

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::CR: return "CR";
    case SpaceKind::eCR: return "eCR";
    case SpaceKind::S1: return "S1";
    case SpaceKind::S2: return "S2";
    case SpaceKind::Vpw: return "Vpw";
    case SpaceKind::Ves: return "Ves";
  }
  return "unknown";
}

DofSpace::DofSpace(const Mesh& mesh, SpaceKind kind) : mesh_(&mesh), kind_(kind) {
  edge_dof_.assign(mesh.num_edges(), -1);
  vertex_dof_.assign(mesh.num_vertices(), -1);
  const bool uses_edges = kind == SpaceKind::CR || kind == SpaceKind::eCR || kind == SpaceKind::Ves;
  const bool uses_vertices = kind == SpaceKind::S1 || kind == SpaceKind::S2;
  if (uses_vertices)
    for (int v = 0; v < mesh.num_vertices(); ++v)
      if (!mesh.is_boundary_vertex(v)) vertex_dof_[v] = num_vertex_dofs_++;
  if (uses_edges || kind == SpaceKind::S2) {
    const int base = kind == SpaceKind::S2 ? num_vertex_dofs_ : 0;
    for (int e = 0; e < mesh.num_edges(); ++e)
      if (!mesh.is_boundary_edge(e)) edge_dof_[e] = base + num_edge_dofs_++;
  }
  const int nt = mesh.num_triangles();
  switch (kind) {
    case SpaceKind::CR: size_ = num_edge_dofs_; break;
    case SpaceKind::eCR: size_ = num_edge_dofs_ + nt; break;
    case SpaceKind::S1: size_ = num_vertex_dofs_; break;
    case SpaceKind::S2: size_ = num_vertex_dofs_ + num_edge_dofs_; break;
    case SpaceKind::Vpw: size_ = 4 * nt; break;
    case SpaceKind::Ves:
      size_ = 4 * nt + num_edge_dofs_ + nt;
      for (int& d : edge_dof_)
        if (d >= 0) d += 4 * nt;
      break;
  }
}

int DofSpace::bubble_dof(int t) const {
  switch (kind_) {
    case SpaceKind::eCR: return num_edge_dofs_ + t;
    case SpaceKind::Vpw: return 4 * t + 3;
    case SpaceKind::Ves: return 4 * mesh_->num_triangles() + num_edge_dofs_ + t;
    default: return -1;
  }
}

LocalBasis DofSpace::local_basis(int t) const {
  LocalBasis b;
  const auto& edges = mesh_->triangle_edges(t);
  const auto& verts = mesh_->triangle(t);
  switch (kind_) {
    case SpaceKind::CR:
    case SpaceKind::eCR:
      for (int e = 0; e < 3; ++e) {
        b.dofs[e] = edge_dof_[edges[e]];
        b.forms[e] = form_cr(e);
      }
      b.size = 3;
      if (kind_ == SpaceKind::eCR) {
        b.dofs[3] = bubble_dof(t);
        b.forms[3] = form_bubble(local_geometry(*mesh_, t));
        b.size = 4;
      }
      break;
    case SpaceKind::S1:
      for (int i = 0; i < 3; ++i) {
        b.dofs[i] = vertex_dof_[verts[i]];
        b.forms[i] = form_barycentric(i);
      }
      b.size = 3;
      break;
    case SpaceKind::S2:
      for (int i = 0; i < 3; ++i) {
        b.dofs[i] = vertex_dof_[verts[i]];
        b.forms[i] = form_p2(i);
        b.dofs[3 + i] = edge_dof_[edges[i]];
        b.forms[3 + i] = form_p2(3 + i);
      }
      b.size = 6;
      break;
    case SpaceKind::Vpw:
      for (int i = 0; i < 3; ++i) {
        b.dofs[i] = 4 * t + i;
        b.forms[i] = form_barycentric(i);
      }
      b.dofs[3] = 4 * t + 3;
      b.forms[3] = form_bubble(local_geometry(*mesh_, t));
      b.size = 4;
      break;
    case SpaceKind::Ves:
      throw std::logic_error("DofSpace: Ves has no scalar local basis; use its Vpw and eCR blocks");
  }
  return b;
}

QuadForm DofSpace::restrict_to(int t, const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() != size_) throw std::invalid_argument("DofSpace: coefficient vector has the wrong size");
  const LocalBasis b = local_basis(t);
  QuadForm q = QuadForm::Zero();
  for (int i = 0; i < b.size; ++i)
    if (b.dofs[i] >= 0) q += coeffs[b.dofs[i]] * b.forms[i];
  return q;
}

double DofSpace::evaluate(int t, const Eigen::VectorXd& coeffs, const Eigen::Vector3d& bary) const {
  return form_value(restrict_to(t, coeffs), bary);
}

Eigen::VectorXd interpolate_cr(const Mesh& mesh, const std::function<double(const Point&)>& f, int points) {
  const DofSpace cr(mesh, SpaceKind::CR);
  const LineRule& rule = gauss_legendre(points);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(cr.size());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const int d = cr.edge_dof(e);
    if (d < 0) continue;
    const Point& a = mesh.vertex(mesh.edge(e).vertices[0]);
    const Point& b = mesh.vertex(mesh.edge(e).vertices[1]);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) s += rule.weights[q] * f(a + rule.points[q] * (b - a));
    out[d] = s;
  }
  return out;
}

Eigen::VectorXd interpolate_cr(const DofSpace& from, const Eigen::VectorXd& v) {
  const Mesh& mesh = from.mesh();
  const DofSpace cr(mesh, SpaceKind::CR);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(cr.size());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const QuadForm q = from.restrict_to(t, v);
    for (int e = 0; e < 3; ++e) {
      const int d = cr.edge_dof(mesh.triangle_edges(t)[e]);
      if (d < 0) continue;
      const int a = (e + 1) % 3;
      const int b = (e + 2) % 3;
      Eigen::Vector3d pa = Eigen::Vector3d::Zero(), pb = Eigen::Vector3d::Zero();
      pa[a] = 1.0;
      pb[b] = 1.0;
      // Simpson's rule is exact for quadratics.
      out[d] = (form_value(q, pa) + 4.0 * form_value(q, 0.5 * (pa + pb)) + form_value(q, pb)) / 6.0;
    }
  }
  return out;
}

Eigen::VectorXd interpolate_ecr(const DofSpace& from, const Eigen::VectorXd& v) {
  const Mesh& mesh = from.mesh();
  const DofSpace cr(mesh, SpaceKind::CR);
  const DofSpace ecr(mesh, SpaceKind::eCR);
  const Eigen::VectorXd c = interpolate_cr(from, v);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ecr.size());
  out.head(cr.size()) = c;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    out[ecr.bubble_dof(t)] = form_mean(from.restrict_to(t, v)) - form_mean(cr.restrict_to(t, c));
  return out;
}

Eigen::VectorXd average_a1(const DofSpace& cr, const Eigen::VectorXd& v) {
  if (cr.kind() != SpaceKind::CR) throw std::invalid_argument("average_a1: expects a CR function");
  const Mesh& mesh = cr.mesh();
  const DofSpace s1(mesh, SpaceKind::S1);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(s1.size());
  for (int z = 0; z < mesh.num_vertices(); ++z) {
    const int d = s1.vertex_dof(z);
    if (d < 0) continue;
    const auto patch = mesh.patch(z);
    double sum = 0.0;
    for (int t : patch) {
      std::array<double, 3> c{};
      double total = 0.0;
      for (int e = 0; e < 3; ++e) {
        const int dof = cr.edge_dof(mesh.triangle_edges(t)[e]);
        c[e] = dof < 0 ? 0.0 : v[dof];
        total += c[e];
      }
      const auto& tri = mesh.triangle(t);
      const int i = static_cast<int>(std::find(tri.begin(), tri.end(), z) - tri.begin());
      sum += total - 2.0 * c[i];
    }
    out[d] = sum / static_cast<double>(patch.size());
  }
  return out;
}

Eigen::VectorXd average_a2(const DofSpace& cr, const Eigen::VectorXd& v) {
  const Mesh& mesh = cr.mesh();
  const DofSpace s1(mesh, SpaceKind::S1);
  const DofSpace s2(mesh, SpaceKind::S2);
  const Eigen::VectorXd vertex = average_a1(cr, v);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(s2.size());
  out.head(s1.size()) = vertex;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const int d = s2.edge_dof(e);
    if (d >= 0) out[d] = v[cr.edge_dof(e)];
  }
  return out;
}

Eigen::VectorXd average_ecr(const DofSpace& ecr, const Eigen::VectorXd& v) {
  if (ecr.kind() != SpaceKind::eCR) throw std::invalid_argument("average_ecr: expects an eCR function");
  const DofSpace cr(ecr.mesh(), SpaceKind::CR);
  return average_a1(cr, decompose_ecr(ecr, v).first);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> decompose_ecr(const DofSpace& ecr, const Eigen::VectorXd& v) {
  if (ecr.kind() != SpaceKind::eCR) throw std::invalid_argument("decompose_ecr: expects an eCR function");
  if (v.size() != ecr.size()) throw std::invalid_argument("decompose_ecr: coefficient vector has the wrong size");
  const int nt = ecr.mesh().num_triangles();
  const int ncr = ecr.size() - nt;
  return {v.head(ncr), v.tail(nt)};
}

}  // namespace eigenbox
