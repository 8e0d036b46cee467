#include <catch2/catch_amalgamated.hpp>

#include "arasurf/builders.hpp"
#include "arasurf/mesh.hpp"
#include "fixtures.hpp"

using namespace arasurf;

TEST_CASE("flat torus has the expected counts", "[mesh]") {
  TriMesh m = build_flat_torus(cplx(0, 1), 16);
  CHECK(m.nv() == 256);
  CHECK(m.ne() == 768);
  CHECK(m.nf() == 512);
  CHECK(m.genus == 1);
  auto rep = m.validate();
  CHECK(rep.ok());
  CHECK(rep.euler_characteristic == 0);
}

TEST_CASE("torus preconditions", "[mesh]") {
  CHECK_THROWS_AS(build_flat_torus(cplx(0, 1), 3), std::invalid_argument);
  CHECK_THROWS_AS(build_flat_torus(cplx(0.5, -0.8), 16), std::invalid_argument);
  CHECK_THROWS_AS(build_flat_torus(cplx(0.5, 0.0), 16), std::invalid_argument);
}

TEST_CASE("halfedge structure is coherent", "[mesh]") {
  TriMesh m = build_flat_torus(cplx(0.5, 0.8), 8);
  for (long h = 0; h < m.nh(); ++h) {
    CHECK(m.he_twin[m.he_twin[(int)h]] == (int)h);
    CHECK(m.he_head[(int)h] == m.he_tail(m.he_twin[(int)h]));
    CHECK(m.he_next[m.he_next[m.he_next[(int)h]]] == (int)h);
  }
  for (long e = 0; e < m.ne(); ++e) {
    int h = m.edge_he[(int)e];
    CHECK(m.he_tail(h) < m.he_head[h]);  // canonical direction
    CHECK(m.he_sign(h) == 1.0);
    CHECK(m.he_sign(m.he_twin[h]) == -1.0);
  }
}

TEST_CASE("orientation failure is detected", "[mesh]") {
  // two faces of a torus soup with one flipped
  TriMesh good = build_flat_torus(cplx(0, 1), 4);
  auto faces = good.faces;
  std::swap(faces[0][0], faces[0][1]);
  auto rep = validate_soup(good.nv(), faces);
  CHECK_FALSE(rep.ok());
  CHECK_FALSE(rep.orientation_consistent);
}

TEST_CASE("hyperelliptic covers satisfy Riemann-Hurwitz", "[mesh]") {
  TriMesh g2 = build_hyperelliptic_cover(fixtures::genus2_branch(), 16);
  CHECK(g2.genus == 2);
  auto rep = g2.validate();
  INFO("failures: " << (rep.failures.empty() ? "" : rep.failures[0]));
  CHECK(rep.ok());
  CHECK(rep.euler_characteristic == -2);
  CHECK(rep.involution_fixed_points == 6);
  CHECK(g2.branch_vertices.size() == 6);

  TriMesh g3 = build_hyperelliptic_cover(fixtures::genus3_branch(), 18);
  CHECK(g3.genus == 3);
  CHECK(g3.validate().euler_characteristic == -4);
}

TEST_CASE("cover preconditions", "[mesh]") {
  std::vector<cplx> odd = {{-1, 0}, {0, 0}, {1, 0}, {2, 0}, {3, 0}};
  CHECK_THROWS_AS(build_hyperelliptic_cover(odd, 12), std::invalid_argument);
  std::vector<cplx> close = {{-2, 0}, {-1, 0}, {0, 0}, {1e-4, 0}, {2, 0}, {5, 0}};
  CHECK_THROWS_AS(build_hyperelliptic_cover(close, 12), std::invalid_argument);
}
