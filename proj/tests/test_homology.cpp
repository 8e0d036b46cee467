#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "arasurf/builders.hpp"
#include "fixtures.hpp"
#include "arasurf/homology.hpp"

using namespace arasurf;

namespace {

bool is_skew(const IMat& M) {
  for (size_t i = 0; i < M.size(); ++i)
    for (size_t j = 0; j < M.size(); ++j)
      if (M[i][j] != -M[j][i]) return false;
  return true;
}

IMat std_symplectic(int g) {
  IMat J = detail::imat(2 * g, 2 * g);
  for (int i = 0; i < g; ++i) {
    J[i][g + i] = 1;
    J[g + i][i] = -1;
  }
  return J;
}

bool loops_closed(const TriMesh& m, const HomologyBasis& hb) {
  for (const auto& loop : hb.loops) {
    if (loop.empty()) return false;
    for (size_t k = 0; k + 1 < loop.size(); ++k)
      if (m.he_head[loop[k]] != m.he_tail(loop[k + 1])) return false;
    if (m.he_head[loop.back()] != m.he_tail(loop.front())) return false;
    if (m.he_tail(loop.front()) != hb.root) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("torus homology", "[homology]") {
  TriMesh m = build_flat_torus(cplx(0, 1), 8);
  HomologyBasis hb = homology_basis(m);
  REQUIRE(hb.loops.size() == 2);
  CHECK(loops_closed(m, hb));
  CHECK(is_skew(hb.intersection));
  long long d = hb.intersection[0][1];
  CHECK((d == 1 || d == -1));

  HomologyBasis red = symplectic_reduce(m, hb);
  CHECK(red.intersection == std_symplectic(1));
  CHECK(loops_closed(m, red));
}

TEST_CASE("cocycles are closed and pair unimodularly", "[homology]") {
  TriMesh m = build_hyperelliptic_cover(
      fixtures::genus2_branch(), 16);
  HomologyBasis hb = homology_basis(m);
  REQUIRE(hb.loops.size() == 4);
  CHECK(is_skew(hb.intersection));

  // closedness: the sum of each cocycle around every face boundary vanishes
  for (const auto& z : hb.cocycles) {
    for (long f = 0; f < m.nf(); ++f) {
      long long s = 0;
      for (int h : m.face_halfedges((int)f))
        s += (long long)std::llround(m.he_sign(h)) * z[m.he_edge[h]];
      REQUIRE(s == 0);
    }
  }

  HomologyBasis red = symplectic_reduce(m, hb);
  CHECK(red.intersection == std_symplectic(2));
  CHECK(loops_closed(m, red));
  // reduced cocycles pair as the identity against the reduced loops
  for (size_t i = 0; i < red.cocycles.size(); ++i)
    for (size_t j = 0; j < red.loops.size(); ++j) {
      long long s = 0;
      for (int h : red.loops[j])
        s += (long long)std::llround(m.he_sign(h)) * red.cocycles[i][m.he_edge[h]];
      REQUIRE(s == (i == j ? 1 : 0));
    }
}

TEST_CASE("genus-0 sphere has empty basis", "[homology]") {
  // octahedron
  std::vector<cplx> pos(6);
  for (int i = 0; i < 6; ++i) pos[i] = cplx(std::cos(i * 1.0), std::sin(i * 1.3));
  std::vector<std::array<int, 3>> faces = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1},
                                           {5, 2, 1}, {5, 3, 2}, {5, 4, 3}, {5, 1, 4}};
  auto edges = TriMesh::collect_edges(6, faces);
  std::vector<double> len(edges.size(), 1.0);
  TriMesh m = TriMesh::build(pos, faces, len);
  CHECK(m.genus == 0);
  HomologyBasis hb = homology_basis(m);
  CHECK(hb.loops.empty());
}

TEST_CASE("symplectic reduction on already-standard input", "[homology]") {
  IMat J = std_symplectic(1);
  IMat U = symplectic_reduce_matrix(J);
  CHECK(detail::imul(detail::imul(U, J), detail::itrans(U)) == J);
}

TEST_CASE("non-unimodular input is rejected", "[homology]") {
  IMat M = detail::imat(2, 2);
  M[0][1] = 2;
  M[1][0] = -2;
  CHECK_THROWS_AS(symplectic_reduce_matrix(M), std::invalid_argument);
}

TEST_CASE("random unimodular skew forms reduce to the standard form", "[homology]") {
  std::mt19937 rng(12345);
  for (int g : {1, 2, 3}) {
    for (int rep = 0; rep < 20; ++rep) {
      IMat M = std_symplectic(g);
      int n = 2 * g;
      // random integer congruence keeps the form skew and unimodular
      for (int ops = 0; ops < 12; ++ops) {
        int a = (int)(rng() % n), b = (int)(rng() % n);
        long long c = (long long)(rng() % 5) - 2;
        if (a == b) continue;
        for (int j = 0; j < n; ++j) M[a][j] += c * M[b][j];
        for (int j = 0; j < n; ++j) M[j][a] += c * M[j][b];
      }
      REQUIRE(is_skew(M));
      IMat U = symplectic_reduce_matrix(M);
      CHECK(detail::imul(detail::imul(U, M), detail::itrans(U)) == std_symplectic(g));
    }
  }
}
