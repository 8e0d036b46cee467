#include <catch2/catch_amalgamated.hpp>

#include "arasurf/builders.hpp"
#include "fixtures.hpp"
#include "arasurf/hodge.hpp"

using namespace arasurf;

namespace {

struct Pipeline {
  TriMesh mesh;
  DecOperators dec;
  HomologyBasis basis;
  HodgeBases hodge;
};

Pipeline run(TriMesh m) {
  Pipeline p{std::move(m), {}, {}, {}};
  p.dec = build_dec(p.mesh);
  p.basis = symplectic_reduce(p.mesh, homology_basis(p.mesh));
  p.hodge = holomorphic_basis(p.mesh, p.dec, p.basis);
  return p;
}

}  // namespace

TEST_CASE("harmonic basis: closed, co-closed, unit periods", "[hodge]") {
  Pipeline p = run(build_flat_torus(cplx(0, 1), 12));
  const auto& A = p.hodge.harmonic;
  REQUIRE(A.cols() == 2);
  CHECK(p.hodge.laplacian_residual < 1e-10);
  for (int j = 0; j < 2; ++j) {
    Eigen::VectorXd a = A.col(j);
    CHECK((p.dec.d1 * a).cwiseAbs().maxCoeff() < 1e-12);
    for (int k = 0; k < 2; ++k) {
      double per = path_integral(p.mesh, a, p.basis.loops[k]);
      CHECK(per == Catch::Approx(j == k ? 1.0 : 0.0).margin(1e-10));
    }
  }
}

TEST_CASE("wedge pairing of harmonic duals equals the symplectic pattern", "[hodge]") {
  Pipeline p = run(build_hyperelliptic_cover(
      fixtures::genus2_branch(), 16));
  const int n = 4;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double w = wedge_integral(p.mesh, p.dec, Eigen::VectorXd(p.hodge.harmonic.col(i)),
                                Eigen::VectorXd(p.hodge.harmonic.col(j)));
      double expect = (double)p.basis.intersection[i][j];
      INFO(i << "," << j);
      CHECK(w == Catch::Approx(expect).margin(1e-9));
    }
}

TEST_CASE("square torus: period matrix round-trips tau=i", "[hodge]") {
  Pipeline p = run(build_flat_torus(cplx(0, 1), 16));
  REQUIRE(p.hodge.tau.rows() == 1);
  cplx tau = p.hodge.tau(0, 0);
  CHECK(std::abs(tau - cplx(0, 1)) < 2e-2);
  CHECK(tau.imag() > 0);
}

TEST_CASE("torus period matrix converges to the modulus", "[hodge]") {
  cplx tau0(0.5, 0.8);
  double err_prev = -1;
  for (int n : {8, 16, 32}) {
    Pipeline p = run(build_flat_torus(tau0, n));
    double err = std::abs(p.hodge.tau(0, 0) - tau0);
    if (err_prev > 0) CHECK(err < err_prev);
    err_prev = err;
  }
  CHECK(err_prev < 5e-3);
}

TEST_CASE("orthonormal Gram is the identity", "[hodge]") {
  Pipeline p = run(build_hyperelliptic_cover(
      fixtures::genus2_branch(), 16));
  Eigen::MatrixXcd G = p.hodge.gram;
  REQUIRE(G.rows() == 2);
  CHECK((G - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("genus-2 period matrix is symmetric with positive imaginary part", "[hodge]") {
  Pipeline p = run(build_hyperelliptic_cover(
      fixtures::genus2_branch(), 16));
  PeriodMatrix pm = period_matrix(p.hodge);
  CHECK(pm.symmetry_defect < 5e-2);
  CHECK(pm.min_im_eigenvalue > 0);
}

TEST_CASE("star anti-eigenvector property of the holomorphic basis", "[hodge]") {
  Pipeline p = run(build_flat_torus(cplx(0, 1), 12));
  Eigen::VectorXcd psi = p.hodge.holomorphic.col(0);
  Eigen::VectorXcd defect = p.dec.star1.cast<cplx>() * psi + cplx(0, 1) * psi;
  CHECK(defect.cwiseAbs().maxCoeff() / psi.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("involution pulls holomorphic forms back to minus themselves", "[hodge]") {
  Pipeline p = run(build_hyperelliptic_cover(
      fixtures::genus2_branch(), 16));
  REQUIRE(p.mesh.involution.has_value());
  const auto& iota = *p.mesh.involution;
  // build the edge permutation with signs induced by the involution
  const TriMesh& m = p.mesh;
  auto edges = TriMesh::collect_edges(m.nv(), m.faces);
  std::map<std::pair<int, int>, int> eidx;
  for (size_t e = 0; e < edges.size(); ++e) eidx[edges[e]] = (int)e;
  for (int col = 0; col < p.hodge.holomorphic.cols(); ++col) {
    Eigen::VectorXcd psi = p.hodge.holomorphic.col(col);
    Eigen::VectorXcd pullback(m.ne());
    for (long e = 0; e < m.ne(); ++e) {
      int u = iota[edges[e].first], v = iota[edges[e].second];
      double sign = u < v ? 1.0 : -1.0;
      pullback[e] = sign * psi[eidx.at({std::min(u, v), std::max(u, v)})];
    }
    double defect = (pullback + psi).cwiseAbs().maxCoeff();
    INFO("column " << col);
    CHECK(defect < 1e-8);
  }
}
