#include "eigenbox/eigensolve.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace eigenbox {

namespace {

constexpr double kInfiniteThreshold = 1e-10;

using Solve = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

[[noreturn]] void too_many(int k, int finite) {
  throw std::invalid_argument("requested k = " + std::to_string(k) + " eigenvalues but the pencil has only " +
                              std::to_string(finite) + " finite eigenvalues");
}

Spectrum truncate(Spectrum s, int k) {
  const int finite = static_cast<int>(s.eigenvalues.size());
  if (k > finite) too_many(k, finite);
  s.eigenvalues.resize(k);
  s.eigenvectors = s.eigenvectors.leftCols(k).eval();
  return s;
}

class SparseFactor {
 public:
  explicit SparseFactor(const SparseMatrix& A) {
    llt_.compute(A);
    if (llt_.info() != Eigen::Success) throw std::runtime_error("A not SPD");
  }
  Eigen::VectorXd operator()(const Eigen::VectorXd& b) const { return llt_.solve(b); }

 private:
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt_;
};

// Solves with the sCR matrix through the mCR matrix K:
// y = K^{-1} (g + C^T f), x_pw = S^{-1} f + C y.
Solve condensed_solver(const CondensedSystem& cond) {
  auto factor = std::make_shared<SparseFactor>(cond.K);
  const CondensedSystem* c = &cond;
  return [factor, c](const Eigen::VectorXd& r) {
    const Eigen::Index npw = c->S.rows();
    const Eigen::VectorXd f = r.head(npw);
    const Eigen::VectorXd g = r.tail(r.size() - npw);
    const Eigen::VectorXd y = (*factor)(g + c->C.transpose() * f);
    Eigen::VectorXd x(r.size());
    x.head(npw) = c->S_inv * f + c->C * y;
    x.tail(y.size()) = y;
    return x;
  };
}

// Thick-restarted block Krylov iteration on T = A^{-1} B, which is
// self-adjoint in the A inner product; its largest eigenvalues are the
// reciprocals of the smallest finite eigenvalues of the pencil.
Spectrum solve_iterative(const SparseMatrix& A, const SparseMatrix& B, int k, int rank_B, const Solve& solve,
                         const EigenOptions& options) {
  const int n = static_cast<int>(A.rows());
  const int p = std::min(k, 4);
  const int kept = std::min(k + p, rank_B);
  const int m = std::min(std::max(2 * k + 4 * p, k + 30), rank_B);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto random_vector = [&] {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
  };
  auto apply_t = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return solve(B * v); };

  Eigen::MatrixXd V(n, m);
  int nv = 0;

  // A-orthogonalise w against V, repeating while a pass removes most of the
  // remaining norm, and append it unless it is dependent.
  auto append = [&](Eigen::VectorXd w) {
    if (nv >= m) return false;
    const double before = std::sqrt(std::max(w.dot(A * w), 0.0));
    if (!(before > 0)) return false;
    double norm = before;
    for (int pass = 0; pass < 4; ++pass) {
      const Eigen::VectorXd Aw = A * w;
      w -= V.leftCols(nv) * (V.leftCols(nv).transpose() * Aw);
      const double next = std::sqrt(std::max(w.dot(A * w), 0.0));
      const bool settled = next > 0.7 * norm;
      norm = next;
      if (settled && pass > 0) break;
    }
    if (!(norm > 1e-14 * before)) return false;
    V.col(nv++) = w / norm;
    return true;
  };

  // Extend by T applied to the given columns until the basis is full.
  auto expand = [&](Eigen::MatrixXd block) {
    while (nv < m) {
      const int first = nv;
      for (int j = 0; j < block.cols() && nv < m; ++j) append(apply_t(block.col(j)));
      if (nv == first) {
        // Invariant subspace found; restart from a fresh direction.
        if (!append(apply_t(random_vector()))) break;
      }
      block = V.middleCols(first, nv - first);
    }
  };

  Eigen::MatrixXd start(n, p);
  for (int j = 0; j < p; ++j) start.col(j) = random_vector();
  expand(start);

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    // Rayleigh-Ritz with the computed A-Gram matrix, so that a slight loss of
    // A-orthogonality in V does not limit the attainable residual.
    const Eigen::MatrixXd BV = B * V.leftCols(nv);
    const Eigen::MatrixXd AV = A * V.leftCols(nv);
    Eigen::MatrixXd H = V.leftCols(nv).transpose() * BV;
    Eigen::MatrixXd G = V.leftCols(nv).transpose() * AV;
    H = 0.5 * (H + H.transpose()).eval();
    G = 0.5 * (G + G.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(H, G);
    const int keep = std::min(kept, nv);
    // Eigenvalues ascend; the wanted ones are the largest.
    Eigen::MatrixXd S(nv, keep);
    Eigen::VectorXd theta(keep);
    for (int j = 0; j < keep; ++j) {
      S.col(j) = eig.eigenvectors().col(nv - 1 - j);
      theta[j] = eig.eigenvalues()[nv - 1 - j];
    }
    Eigen::MatrixXd Y = V.leftCols(nv) * S;

    std::vector<int> unconverged;
    for (int j = 0; j < std::min(k, keep); ++j) {
      if (!(theta[j] > 0)) {
        unconverged.push_back(j);
        continue;
      }
      const Eigen::VectorXd Ay = A * Y.col(j);
      const Eigen::VectorXd r = Ay - (B * Y.col(j)) / theta[j];
      if (r.norm() > options.tolerance * Ay.norm()) unconverged.push_back(j);
    }
    if (unconverged.empty() && keep >= k) {
      Spectrum s;
      s.n_infinite = n - rank_B;
      s.eigenvectors.resize(n, k);
      for (int j = 0; j < k; ++j) {
        s.eigenvalues.push_back(1.0 / theta[j]);
        s.eigenvectors.col(j) = Y.col(j) / std::sqrt(theta[j]);
      }
      return s;
    }
    if (nv < m) break;  // basis could not be extended, nothing left to gain

    V.leftCols(keep) = Y;
    nv = keep;
    Eigen::MatrixXd block(n, std::min<int>(p, static_cast<int>(unconverged.size())));
    for (int j = 0; j < block.cols(); ++j) block.col(j) = Y.col(unconverged[j]);
    expand(block);
  }
  throw std::runtime_error("eigensolver did not converge for k = " + std::to_string(k));
}

}  // namespace

Spectrum solve_dense(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const Eigen::Index n = A.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) throw std::runtime_error("A not SPD");
  const auto L = llt.matrixL();
  // C = L^{-1} B L^{-T}
  const Eigen::MatrixXd X = L.solve(B);
  Eigen::MatrixXd C = L.solve(X.transpose());
  C = 0.5 * (C + C.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
  const Eigen::VectorXd& mu = eig.eigenvalues();
  const double mu_max = n > 0 ? std::max(mu[n - 1], 0.0) : 0.0;
  Spectrum s;
  int finite = 0;
  for (Eigen::Index i = n - 1; i >= 0; --i)
    if (mu_max > 0 && mu[i] > kInfiniteThreshold * mu_max) ++finite;
  s.n_infinite = static_cast<int>(n) - finite;
  s.eigenvectors.resize(n, finite);
  const auto U = llt.matrixU();
  for (int j = 0; j < finite; ++j) {
    const Eigen::Index i = n - 1 - j;
    s.eigenvalues.push_back(1.0 / mu[i]);
    s.eigenvectors.col(j) = U.solve(eig.eigenvectors().col(i)) / std::sqrt(mu[i]);
  }
  return s;
}

Spectrum solve_generalized(const SparseMatrix& A, const SparseMatrix& B, int k, int rank_B,
                           const EigenOptions& options) {
  if (k < 1) throw std::invalid_argument("solve_generalized: k must be >= 1");
  if (A.rows() != A.cols() || B.rows() != A.rows() || B.cols() != A.cols())
    throw std::invalid_argument("solve_generalized: A and B must be square of equal size");
  if (rank_B >= 0 && k > rank_B) too_many(k, rank_B);
  const bool dense = rank_B < 0 || (!options.force_iterative && A.rows() <= options.dense_threshold);
  if (dense) return truncate(solve_dense(Eigen::MatrixXd(A), Eigen::MatrixXd(B)), k);
  const SparseFactor factor(A);
  return solve_iterative(A, B, k, rank_B, [&factor](const Eigen::VectorXd& b) { return factor(b); }, options);
}

Spectrum solve_generalized(const MatrixPair& pair, int k, const EigenOptions& options) {
  if (k < 1) throw std::invalid_argument("solve_generalized: k must be >= 1");
  if (k > pair.rank_B) too_many(k, pair.rank_B);
  const bool dense = !options.force_iterative && pair.A.rows() <= options.dense_threshold;
  if (dense || !pair.condensed) return solve_generalized(pair.A, pair.B, k, pair.rank_B, options);
  return solve_iterative(pair.A, pair.B, k, pair.rank_B, condensed_solver(*pair.condensed), options);
}

}  // namespace eigenbox
