#include "eigenbox/gub.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace eigenbox {

namespace {

// Nonconforming component of the columns of U as functions in `space`.
Eigen::MatrixXd nc_component(Method method, const Mesh& mesh, const Eigen::MatrixXd& U) {
  if (method != Method::sCR) return U;
  const int offset = 4 * mesh.num_triangles();
  return U.bottomRows(U.rows() - offset);
}

SpaceKind nc_space(Method method) { return method == Method::sCR ? SpaceKind::eCR : space_of(method); }

void check_averaging(Method method, Averaging avg) {
  const SpaceKind s = nc_space(method);
  const bool ok = (s == SpaceKind::CR && (avg == Averaging::A1 || avg == Averaging::A2)) ||
                  (s == SpaceKind::eCR && avg == Averaging::ECR) ||
                  (s == SpaceKind::S1 && avg == Averaging::Identity);
  if (!ok) throw std::invalid_argument("averaging does not match the space of method " + to_string(method));
}

}  // namespace

SpaceKind averaged_space(Averaging avg) { return avg == Averaging::A2 ? SpaceKind::S2 : SpaceKind::S1; }

Eigen::MatrixXd average_eigenfunctions(Method method, const Mesh& mesh, const Eigen::MatrixXd& U, Averaging avg) {
  check_averaging(method, avg);
  const DofSpace space(mesh, nc_space(method));
  const Eigen::MatrixXd X = nc_component(method, mesh, U);
  if (X.rows() != space.size()) throw std::invalid_argument("average_eigenfunctions: eigenvector size mismatch");
  if (avg == Averaging::Identity) return X;
  const DofSpace target(mesh, averaged_space(avg));
  Eigen::MatrixXd W(target.size(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const Eigen::VectorXd x = X.col(j);
    switch (avg) {
      case Averaging::A1: W.col(j) = average_a1(space, x); break;
      case Averaging::A2: W.col(j) = average_a2(space, x); break;
      case Averaging::ECR: W.col(j) = average_ecr(space, x); break;
      case Averaging::Identity: break;
    }
  }
  return W;
}

GubResult rayleigh_ritz(const MatrixPair& conforming, const Eigen::MatrixXd& W) {
  if (W.cols() == 0) throw std::invalid_argument("rayleigh_ritz: K must be >= 1");
  if (W.rows() != conforming.A.rows()) throw std::invalid_argument("rayleigh_ritz: size mismatch");
  Eigen::MatrixXd A = W.transpose() * (conforming.A * W);
  Eigen::MatrixXd B = W.transpose() * (conforming.B * W);
  A = 0.5 * (A + A.transpose()).eval();
  B = 0.5 * (B + B.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(B);
  const double threshold = 1e-12 * B.diagonal().maxCoeff();
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < B.rows(); ++i)
    if (gram.eigenvalues()[i] > threshold) keep.push_back(static_cast<int>(i));
  GubResult r;
  r.k_available = static_cast<int>(keep.size());
  r.degenerate = r.k_available < W.cols();
  if (keep.empty()) return r;
  Eigen::MatrixXd Z(B.rows(), keep.size());
  for (std::size_t j = 0; j < keep.size(); ++j)
    Z.col(j) = gram.eigenvectors().col(keep[j]) / std::sqrt(gram.eigenvalues()[keep[j]]);
  Eigen::MatrixXd H = Z.transpose() * A * Z;
  H = 0.5 * (H + H.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H, Eigen::EigenvaluesOnly);
  r.mu.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
  return r;
}

GubResult gub_from_averaging(Method method, const Mesh& mesh, const Potential& V, const Eigen::MatrixXd& U,
                             Averaging avg, const AssemblyOptions& options) {
  const Eigen::MatrixXd W = average_eigenfunctions(method, mesh, U, avg);
  return rayleigh_ritz(assemble_conforming(averaged_space(avg), mesh, V, options), W);
}

double alpha_k(Method method, const Mesh& mesh, const Eigen::MatrixXd& U, const std::vector<double>& lambda,
               Averaging avg) {
  const Eigen::Index k = U.cols();
  if (static_cast<Eigen::Index>(lambda.size()) != k) throw std::invalid_argument("alpha_k: one eigenvalue per column");
  const DofSpace space(mesh, nc_space(method));
  const DofSpace target(mesh, averaged_space(avg));
  const Eigen::MatrixXd X = nc_component(method, mesh, U);
  const Eigen::MatrixXd W = average_eigenfunctions(method, mesh, U, avg);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(k, k);
  std::vector<QuadForm> diff(k);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const LocalGeometry g = local_geometry(mesh, t);
    for (Eigen::Index j = 0; j < k; ++j)
      diff[j] = space.restrict_to(t, X.col(j)) - target.restrict_to(t, W.col(j));
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) C(i, j) += form_l2(diff[i], diff[j], g);
  }
  C = C.selfadjointView<Eigen::Lower>();
  Eigen::VectorXd d(k);
  for (Eigen::Index j = 0; j < k; ++j) d[j] = 1.0 / std::sqrt(lambda[j]);
  const Eigen::MatrixXd scaled = d.asDiagonal() * C * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(scaled, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
}

bool existence_check(double alpha, double lambda) { return alpha < 1.0 / std::sqrt(lambda); }

}  // namespace eigenbox
