#pragma once

// Harmonic 1-cochain bases, the orthonormal holomorphic basis and the period
// matrix.
//
// Harmonic representatives are obtained by projecting the integer loop-dual
// cocycles: one Poisson solve per generator removes the exact part, the
// result is closed exactly (integer cocycle minus an exact cochain) and
// co-closed up to solver tolerance. Periods against the symplectic loops are
// then the exact identity pattern, because path sums of exact cochains
// telescope away around closed loops.
//
// The conjugation operator on the harmonic subspace is S = -G^{-1} W where G
// is the Whitney L2 Gram and W the wedge pairing: this is the unique matrix
// with int a ^ b = -<a, S b>_{L2}, i.e. the conformal structure the discrete
// metric induces on harmonic cochains. The orientation convention is pinned
// so that the flat-torus holomorphic form matches dz (checked in the tests).

#include "arasurf/dec.hpp"
#include "arasurf/homology.hpp"
#include "arasurf/solvers.hpp"

#include <Eigen/Cholesky>

namespace arasurf {

struct HodgeBases {
  Eigen::MatrixXd harmonic;      // E x 2g; column j dual to symplectic loop j
  Eigen::MatrixXd conj_matrix;   // 2g x 2g; star restricted to the harmonic span
  Eigen::MatrixXcd holomorphic;  // E x g, orthonormal: (i/2) int psi_i ^ conj(psi_j) = id
  Eigen::MatrixXcd gram;         // g x g Gram of the orthonormal basis
  Eigen::MatrixXcd tau;          // g x g period matrix (a-periods normalized)
  double laplacian_residual = 0; // max co-closedness residual of the harmonic basis
  int genus = 0;
};

struct PeriodMatrix {
  Eigen::MatrixXcd tau;
  double symmetry_defect = 0;
  double min_im_eigenvalue = 0;
};

// 2g harmonic representatives dual to the (symplectically reduced) loops.
inline Eigen::MatrixXd harmonic_basis(const TriMesh& m, const DecOperators& dec,
                                      const HomologyBasis& basis,
                                      double* residual_out = nullptr) {
  const int n = (int)basis.loops.size();
  Eigen::MatrixXd A(m.ne(), n);
  if (n == 0) {
    if (residual_out) *residual_out = 0;
    return A;
  }
  if ((int)basis.cocycles.size() != n)
    throw std::invalid_argument("homology basis carries no cocycles");
  PinnedSpdSolver solver(dec.laplacian0, 0);
  double res = 0;
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd y(m.ne());
    for (long e = 0; e < m.ne(); ++e) y[e] = (double)basis.cocycles[j][e];
    Eigen::VectorXd rhs = dec.d0.transpose() * dec.w1.asDiagonal() * y;
    Eigen::VectorXd phi = solver.solve(rhs);
    A.col(j) = y - dec.d0 * phi;
    // closedness is exact; record the co-closedness residual
    Eigen::VectorXd codiff = dec.d0.transpose() * dec.w1.asDiagonal() * A.col(j);
    res = std::max(res, codiff.cwiseAbs().maxCoeff());
  }
  if (residual_out) *residual_out = res;
  return A;
}

// Star restricted to the span of the given harmonic basis.
inline Eigen::MatrixXd harmonic_conjugation(const TriMesh& m, const DecOperators& dec,
                                            const Eigen::MatrixXd& A) {
  const int n = (int)A.cols();
  Eigen::MatrixXd G(n, n), W(n, n);
  Eigen::MatrixXd MA = dec.mass1 * A, WA = dec.wedge1 * A;
  G = A.transpose() * MA;
  W = A.transpose() * WA;
  return -G.llt().solve(W);
}

inline HodgeBases holomorphic_basis(const TriMesh& m, const DecOperators& dec,
                                    const HomologyBasis& basis) {
  HodgeBases hb;
  hb.genus = m.genus;
  const int g = m.genus, n = 2 * g;
  hb.harmonic = harmonic_basis(m, dec, basis, &hb.laplacian_residual);
  if (g == 0) return hb;
  hb.conj_matrix = harmonic_conjugation(m, dec, hb.harmonic);

  // psi_j = alpha_j + i * (star alpha_j) for the a-cycle duals
  Eigen::MatrixXcd Psi(m.ne(), g);
  for (int j = 0; j < g; ++j) {
    Eigen::VectorXd sa = hb.harmonic * hb.conj_matrix.col(j);
    Psi.col(j) = hb.harmonic.col(j).cast<cplx>() + cplx(0, 1) * sa.cast<cplx>();
  }

  // periods (a-normalization) straight from the conjugation matrix
  {
    Eigen::MatrixXcd Ap(g, g), Bp(g, g);
    for (int k = 0; k < g; ++k)
      for (int j = 0; j < g; ++j) {
        Ap(k, j) = (k == j ? 1.0 : 0.0) + cplx(0, 1) * hb.conj_matrix(k, j);
        Bp(k, j) = cplx(0, 1) * hb.conj_matrix(g + k, j);
      }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(Ap);
    if (!lu.isInvertible())
      throw std::runtime_error("singular a-period matrix");
    hb.tau = Bp * lu.inverse();
  }

  // orthonormalize: H = (i/2) Psi^T Wedge conj(Psi), Hermitian positive definite
  Eigen::MatrixXcd H(g, g);
  {
    Eigen::MatrixXcd WP = dec.wedge1.cast<cplx>() * Psi.conjugate();
    H = cplx(0, 0.5) * (Psi.transpose() * WP);
  }
  Eigen::LLT<Eigen::MatrixXcd> llt(H);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "holomorphic Gram matrix not positive definite (star or orientation broken)");
  Eigen::MatrixXcd Linv = Eigen::MatrixXcd(llt.matrixL()).inverse();
  hb.holomorphic = Psi * Linv.adjoint();
  {
    Eigen::MatrixXcd WP = dec.wedge1.cast<cplx>() * hb.holomorphic.conjugate();
    hb.gram = cplx(0, 0.5) * (hb.holomorphic.transpose() * WP);
  }
  return hb;
}

inline PeriodMatrix period_matrix(const HodgeBases& hb) {
  PeriodMatrix pm;
  pm.tau = hb.tau;
  if (hb.tau.rows() == 0) return pm;
  pm.symmetry_defect = (hb.tau - hb.tau.transpose()).cwiseAbs().maxCoeff();
  Eigen::MatrixXd imtau = hb.tau.imag();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (imtau + imtau.transpose()));
  pm.min_im_eigenvalue = es.eigenvalues().minCoeff();
  return pm;
}

// Period of a 1-cochain along an edge path (sum of signed values).
template <class Vec>
auto path_integral(const TriMesh& m, const Vec& a, const std::vector<int>& halfedges) {
  typename Vec::Scalar s(0);
  for (int h : halfedges) s += m.he_sign(h) * a[m.he_edge[h]];
  return s;
}

}  // namespace arasurf
