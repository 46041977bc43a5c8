#include "eigenbox/assembly.hpp"

#include "eigenbox/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace eigenbox {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(int rows, int cols, const Triplets& entries) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  return m;
}

SparseMatrix symmetrized(const SparseMatrix& m) { return 0.5 * (m + SparseMatrix(m.transpose())); }

double alpha_of(const std::vector<double>& alpha, int t) { return alpha.empty() ? 1.0 : alpha[t]; }

template <class LocalFn>
SparseMatrix assemble_local(const DofSpace& space, LocalFn&& local) {
  const Mesh& mesh = space.mesh();
  Triplets entries;
  entries.reserve(static_cast<std::size_t>(mesh.num_triangles()) * 16);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const LocalGeometry g = local_geometry(mesh, t);
    const LocalBasis b = space.local_basis(t);
    for (int i = 0; i < b.size; ++i) {
      if (b.dofs[i] < 0) continue;
      for (int j = 0; j <= i; ++j) {
        if (b.dofs[j] < 0) continue;
        const double v = local(t, g, b.forms[i], b.forms[j]);
        entries.emplace_back(b.dofs[i], b.dofs[j], v);
        if (j != i) entries.emplace_back(b.dofs[j], b.dofs[i], v);
      }
    }
  }
  return from_triplets(space.size(), space.size(), entries);
}

// Potential term (V u, v) with V either by quadrature or by its triangle means.
SparseMatrix potential_mass(const DofSpace& space, const Potential& V, bool projected, int degree) {
  const Mesh& mesh = space.mesh();
  if (projected || V.is_piecewise_constant_on(mesh)) {
    const std::vector<double> vt = V.pi0(mesh);
    return assemble_local(space, [&](int t, const LocalGeometry& g, const QuadForm& p, const QuadForm& q) {
      return vt[t] * form_l2(p, q, g);
    });
  }
  const QuadratureRule& rule = triangle_rule(degree);
  return assemble_local(space, [&](int, const LocalGeometry& g, const QuadForm& p, const QuadForm& q) {
    double s = 0.0;
    for (std::size_t k = 0; k < rule.weights.size(); ++k) {
      const Eigen::Vector3d& l = rule.points[k];
      const Point x = l[0] * g.vertices[0] + l[1] * g.vertices[1] + l[2] * g.vertices[2];
      s += rule.weights[k] * V(x) * form_value(p, l) * form_value(q, l);
    }
    return g.area * s;
  });
}

// sum_T w_T |T| m_T m_T^T with m_T the triangle means of the basis.
SparseMatrix mean_product(const DofSpace& space, const std::vector<double>& weight) {
  return assemble_local(space, [&](int t, const LocalGeometry& g, const QuadForm& p, const QuadForm& q) {
    return weight[t] * g.area * form_mean(p) * form_mean(q);
  });
}

SparseMatrix block_matrix(const SparseMatrix& a11, const SparseMatrix& a12, const SparseMatrix& a21,
                          const SparseMatrix& a22) {
  const int n1 = static_cast<int>(a11.rows());
  const int n2 = static_cast<int>(a22.rows());
  Triplets entries;
  entries.reserve(a11.nonZeros() + a12.nonZeros() + a21.nonZeros() + a22.nonZeros());
  auto add = [&](const SparseMatrix& m, int r0, int c0) {
    for (int c = 0; c < m.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(m, c); it; ++it) entries.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
  };
  add(a11, 0, 0);
  add(a12, 0, n1);
  add(a21, n1, 0);
  add(a22, n1, n1);
  return from_triplets(n1 + n2, n1 + n2, entries);
}

void check_alpha(const Mesh& mesh, const std::vector<double>& alpha) {
  if (alpha.empty()) return;
  if (static_cast<int>(alpha.size()) != mesh.num_triangles())
    throw std::invalid_argument("assemble: one diffusion value per triangle required");
  for (double a : alpha)
    if (!(a > 0)) throw std::invalid_argument("assemble: diffusion coefficient must be positive");
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::CR: return "cr";
    case Method::eCR: return "ecr";
    case Method::mCR: return "mcr";
    case Method::RT: return "rt";
    case Method::sCR: return "scr";
    case Method::S1: return "s1";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::CR, Method::eCR, Method::mCR, Method::RT, Method::sCR, Method::S1})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown method '" + name + "' (expected cr, ecr, mcr, rt, scr or s1)");
}

SpaceKind space_of(Method method) {
  switch (method) {
    case Method::CR: return SpaceKind::CR;
    case Method::eCR:
    case Method::mCR:
    case Method::RT: return SpaceKind::eCR;
    case Method::sCR: return SpaceKind::Ves;
    case Method::S1: return SpaceKind::S1;
  }
  return SpaceKind::CR;
}

bool needs_piecewise_constant(Method method) {
  return method == Method::mCR || method == Method::RT || method == Method::sCR;
}

SparseMatrix stiffness_matrix(const DofSpace& space, const std::vector<double>& alpha) {
  return assemble_local(space, [&](int t, const LocalGeometry& g, const QuadForm& p, const QuadForm& q) {
    return alpha_of(alpha, t) * form_energy(p, q, g);
  });
}

SparseMatrix mass_matrix(const DofSpace& space) {
  return assemble_local(space, [](int, const LocalGeometry& g, const QuadForm& p, const QuadForm& q) {
    return form_l2(p, q, g);
  });
}

SparseMatrix ecr_to_vpw(const Mesh& mesh) {
  const DofSpace ecr(mesh, SpaceKind::eCR);
  Triplets entries;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int e = 0; e < 3; ++e) {
      const int d = ecr.edge_dof(mesh.triangle_edges(t)[e]);
      if (d < 0) continue;
      // psi_e takes the value 1 - 2 delta_ie at vertex i.
      for (int i = 0; i < 3; ++i) entries.emplace_back(4 * t + i, d, i == e ? -1.0 : 1.0);
    }
    entries.emplace_back(4 * t + 3, ecr.bubble_dof(t), 1.0);
  }
  return from_triplets(4 * mesh.num_triangles(), ecr.size(), entries);
}

MatrixPair assemble(Method method, const Mesh& mesh, const Potential& V, const AssemblyOptions& options) {
  check_alpha(mesh, options.alpha);
  if (needs_piecewise_constant(method) && !options.project_potential && !V.is_piecewise_constant_on(mesh))
    throw std::invalid_argument("assemble: method " + to_string(method) + " requires a potential constant on each triangle; " +
                                V.name() + " is not (enable potential projection)");
  if (method == Method::S1) return assemble_conforming(SpaceKind::S1, mesh, V, options);

  MatrixPair pair;
  pair.method = method;
  pair.space = space_of(method);

  if (method == Method::CR || method == Method::eCR) {
    const DofSpace space(mesh, pair.space);
    pair.A = stiffness_matrix(space, options.alpha) +
             potential_mass(space, V, options.project_potential, options.quadrature_degree);
    pair.B = mass_matrix(space);
    pair.rank_B = space.size();
    return pair;
  }

  const DofSpace ecr(mesh, SpaceKind::eCR);
  const SparseMatrix K = stiffness_matrix(ecr, options.alpha) + mean_product(ecr, V.pi0(mesh));
  if (method == Method::mCR) {
    pair.A = K;
    pair.B = mass_matrix(ecr);
    pair.rank_B = ecr.size();
    return pair;
  }
  if (method == Method::RT) {
    pair.A = K;
    pair.B = mean_product(ecr, std::vector<double>(mesh.num_triangles(), 1.0));
    pair.rank_B = mesh.num_triangles();
    return pair;
  }

  // sCR on Vpw x eCR.
  const int nt = mesh.num_triangles();
  const double alpha_min =
      options.alpha.empty() ? 1.0 : *std::min_element(options.alpha.begin(), options.alpha.end());
  const DofSpace vpw(mesh, SpaceKind::Vpw);
  Triplets s_entries, s_inv_entries, m_entries;
  for (int t = 0; t < nt; ++t) {
    const LocalGeometry g = local_geometry(mesh, t);
    const LocalBasis b = vpw.local_basis(t);
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = form_l2(b.forms[i], b.forms[j], g);
    const double h = mesh.diameter(t);
    const double w = alpha_min / (options.kappa_ecr * options.kappa_ecr * h * h);
    const Eigen::Matrix4d s = w * m;
    Eigen::Matrix4d s_inv = s.inverse();
    s_inv = 0.5 * (s_inv + s_inv.transpose()).eval();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        m_entries.emplace_back(4 * t + i, 4 * t + j, m(i, j));
        s_entries.emplace_back(4 * t + i, 4 * t + j, s(i, j));
        s_inv_entries.emplace_back(4 * t + i, 4 * t + j, s_inv(i, j));
      }
  }
  auto cond = std::make_shared<CondensedSystem>();
  cond->K = K;
  cond->C = ecr_to_vpw(mesh);
  cond->S = from_triplets(4 * nt, 4 * nt, s_entries);
  cond->S_inv = from_triplets(4 * nt, 4 * nt, s_inv_entries);
  const SparseMatrix SC = cond->S * cond->C;
  const SparseMatrix CtSC = SparseMatrix(cond->C.transpose()) * SC;
  const SparseMatrix negSC = -SC;
  const SparseMatrix negCtS = SparseMatrix(negSC.transpose());
  pair.A = block_matrix(cond->S, negSC, negCtS, symmetrized(K + CtSC));
  const SparseMatrix mpw = from_triplets(4 * nt, 4 * nt, m_entries);
  const SparseMatrix zero12(4 * nt, ecr.size());
  const SparseMatrix zero21(ecr.size(), 4 * nt);
  const SparseMatrix zero22(ecr.size(), ecr.size());
  pair.B = block_matrix(mpw, zero12, zero21, zero22);
  pair.rank_B = 4 * nt;
  pair.condensed = std::move(cond);
  return pair;
}

MatrixPair assemble_courant(const Mesh& mesh, const Potential& V, const AssemblyOptions& options) {
  return assemble_conforming(SpaceKind::S1, mesh, V, options);
}

MatrixPair assemble_conforming(SpaceKind kind, const Mesh& mesh, const Potential& V, const AssemblyOptions& options) {
  if (kind != SpaceKind::S1 && kind != SpaceKind::S2)
    throw std::invalid_argument("assemble_conforming: space must be S1 or S2");
  check_alpha(mesh, options.alpha);
  const DofSpace space(mesh, kind);
  MatrixPair pair;
  pair.method = Method::S1;
  pair.space = kind;
  pair.A = stiffness_matrix(space, options.alpha) +
           potential_mass(space, V, options.project_potential, options.quadrature_degree);
  pair.B = mass_matrix(space);
  pair.rank_B = space.size();
  return pair;
}

void write_coordinate(std::ostream& out, const SparseMatrix& m) {
  out << std::setprecision(17);
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m, c); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

}  // namespace eigenbox
