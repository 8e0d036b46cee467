#pragma once

// Sparse solver wrappers. The Laplacian is positive semidefinite with the
// constants as nullspace; we factor the matrix with one vertex pinned, which
// is exact for consistent right-hand sides (the solution is recovered up to
// the constant that the caller projects out). The factorization is immutable
// after construction and safe to share across concurrent solves.

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/IterativeLinearSolvers>

#include <memory>
#include <stdexcept>

namespace arasurf {

class PinnedSpdSolver {
 public:
  PinnedSpdSolver() = default;

  PinnedSpdSolver(const Eigen::SparseMatrix<double>& A, int pinned)
      : n_((int)A.rows()), pinned_(pinned) {
    Eigen::SparseMatrix<double> R(n_ - 1, n_ - 1);
    {
      std::vector<Eigen::Triplet<double>> t;
      t.reserve(A.nonZeros());
      for (int k = 0; k < A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
          int r = (int)it.row(), c = (int)it.col();
          if (r == pinned_ || c == pinned_) continue;
          t.emplace_back(r < pinned_ ? r : r - 1, c < pinned_ ? c : c - 1, it.value());
        }
      R.setFromTriplets(t.begin(), t.end());
    }
    ldlt_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
    ldlt_->compute(R);
    if (ldlt_->info() != Eigen::Success) {
      // iterative fallback; rarely taken, kept for robustness on stiff metrics
      cg_ = std::make_shared<
          Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                                   Eigen::Lower | Eigen::Upper>>();
      reduced_ = std::make_shared<Eigen::SparseMatrix<double>>(R);
      cg_->setTolerance(1e-12);
      cg_->setMaxIterations(20L * n_);
      cg_->compute(*reduced_);
      if (cg_->info() != Eigen::Success)
        throw std::runtime_error("sparse factorization and CG setup both failed");
    }
  }

  // Solve A x = b with x[pinned] = 0; b must be consistent (sum-orthogonal
  // to the nullspace).
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    Eigen::VectorXd br(n_ - 1);
    for (int i = 0, j = 0; i < n_; ++i)
      if (i != pinned_) br[j++] = b[i];
    Eigen::VectorXd xr;
    if (cg_) {
      xr = cg_->solve(br);
      if (cg_->info() != Eigen::Success)
        throw std::runtime_error("iterative solver did not converge");
    } else {
      xr = ldlt_->solve(br);
    }
    Eigen::VectorXd x(n_);
    for (int i = 0, j = 0; i < n_; ++i) x[i] = i == pinned_ ? 0.0 : xr[j++];
    return x;
  }

  int pinned_vertex() const { return pinned_; }

 private:
  int n_ = 0, pinned_ = 0;
  std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> ldlt_;
  std::shared_ptr<Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                                           Eigen::Lower | Eigen::Upper>>
      cg_;
  std::shared_ptr<Eigen::SparseMatrix<double>> reduced_;
};

}  // namespace arasurf
