#pragma once

// Discrete exterior calculus operators on a TriMesh.
//
// Sign and orientation conventions (everything downstream refers here):
//   * faces are ccw; each face is laid out isometrically in a local chart
//     with positive area, and J denotes the +90 degree rotation (x,y) ->
//     (-y,x) in that chart. J is the discrete Hodge star on 1-forms, so
//     *dx = dy, *dy = -dx and holomorphic 1-forms satisfy *psi = -i psi.
//   * edges are canonically directed from the smaller to the larger vertex
//     id; 1-cochain values flip sign with direction reversal.
//   * d0, d1 are the signed incidence operators; d1*d0 = 0 holds exactly in
//     integer arithmetic.
//   * L = d0^T W1 d0 with the half-cotangent weights W1 is positive
//     semidefinite with constant nullspace. For a 0-form u the smooth
//     operator d*d u (a 2-form of total integral 0) corresponds to the
//     weak vertex load -(L u): the weak form of Delta u against the hat
//     basis is -(L u)_v.
//   * 2-cochains store integrated face values. Pairing a 2-cochain Omega
//     with a vertex function phi uses the hat-average quadrature
//     sum_f Omega(f) * mean(phi on corners); the adjoint map
//     (B Omega)_v = sum_{f at v} Omega(f)/3 spreads face values to vertex
//     loads. The same B is used everywhere so that the Green operator and
//     its kernel contractions stay mutually adjoint.

#include "arasurf/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace arasurf {

using SpMat = Eigen::SparseMatrix<double>;

struct FaceGeometry {
  // local layout p0=(0,0), p1=(l01,0), p2 above the axis
  Eigen::Vector2d p[3];
  Eigen::Vector2d grad[3];  // barycentric gradients
  double area = 0;
  Eigen::Matrix3d mass;     // Whitney 1-form L2 products, local edge order (e01,e12,e20)
};

struct DecOperators {
  SpMat d0;            // E x V
  SpMat d1;            // F x E
  Eigen::VectorXd w1;  // half-cotangent edge weights (may vanish or go negative)
  SpMat laplacian0;    // d0^T diag(w1) d0
  SpMat mass1;         // Whitney 1-form mass matrix, SPD
  SpMat wedge1;        // antisymmetric: int a ^ b = a^T wedge1 b
  SpMat star1;         // rotation star on 1-cochains (face-averaged Whitney rotation)
  Eigen::VectorXd face_area;
  Eigen::VectorXd vertex_area;  // barycentric
  double total_area = 0;
  std::vector<FaceGeometry> fgeom;

  // local (signed) cochain values of face f in edge order (e01,e12,e20)
  template <class Vec>
  std::array<typename Vec::Scalar, 3> local_values(const TriMesh& m, int f,
                                                   const Vec& a) const {
    auto hs = m.face_halfedges(f);
    std::array<typename Vec::Scalar, 3> out;
    for (int k = 0; k < 3; ++k)
      out[k] = m.he_sign(hs[k]) * a[m.he_edge[hs[k]]];
    return out;
  }
};

inline FaceGeometry face_geometry(double l01, double l12, double l20) {
  FaceGeometry g;
  double x2 = (l01 * l01 + l20 * l20 - l12 * l12) / (2 * l01);
  double y2sq = l20 * l20 - x2 * x2;
  if (!(y2sq > 0)) throw std::invalid_argument("degenerate triangle in metric");
  g.p[0] << 0, 0;
  g.p[1] << l01, 0;
  g.p[2] << x2, std::sqrt(y2sq);
  g.area = 0.5 * l01 * g.p[2].y();
  auto J = [](Eigen::Vector2d v) { return Eigen::Vector2d(-v.y(), v.x()); };
  g.grad[0] = J(g.p[2] - g.p[1]) / (2 * g.area);
  g.grad[1] = J(g.p[0] - g.p[2]) / (2 * g.area);
  g.grad[2] = J(g.p[1] - g.p[0]) / (2 * g.area);
  // int_T lambda_i lambda_j = A(1+delta_ij)/12
  auto I = [&](int i, int j) { return g.area * (i == j ? 2.0 : 1.0) / 12.0; };
  const int tail[3] = {0, 1, 2}, head[3] = {1, 2, 0};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      int a = tail[r], b = head[r], cc = tail[c], d = head[c];
      g.mass(r, c) = g.grad[b].dot(g.grad[d]) * I(a, cc) -
                     g.grad[b].dot(g.grad[cc]) * I(a, d) -
                     g.grad[a].dot(g.grad[d]) * I(b, cc) +
                     g.grad[a].dot(g.grad[cc]) * I(b, d);
    }
  return g;
}

inline DecOperators build_dec(const TriMesh& m) {
  DecOperators dec;
  const long V = m.nv(), E = m.ne(), F = m.nf();

  {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(2 * E);
    for (long e = 0; e < E; ++e) {
      int h = m.edge_he[(int)e];
      t.emplace_back((int)e, m.he_head[h], 1.0);
      t.emplace_back((int)e, m.he_tail(h), -1.0);
    }
    dec.d0.resize(E, V);
    dec.d0.setFromTriplets(t.begin(), t.end());
  }
  {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(3 * F);
    for (long f = 0; f < F; ++f)
      for (int h : m.face_halfedges((int)f))
        t.emplace_back((int)f, m.he_edge[h], m.he_sign(h));
    dec.d1.resize(F, E);
    dec.d1.setFromTriplets(t.begin(), t.end());
  }

  dec.fgeom.resize(F);
  dec.face_area.resize(F);
  dec.vertex_area = Eigen::VectorXd::Zero(V);
  dec.w1 = Eigen::VectorXd::Zero(E);
  std::vector<Eigen::Triplet<double>> tm, tw, tr;
  for (long f = 0; f < F; ++f) {
    auto l = m.face_lengths((int)f);
    FaceGeometry g = face_geometry(l[0], l[1], l[2]);
    dec.face_area[f] = g.area;
    dec.total_area += g.area;
    auto hs = m.face_halfedges((int)f);
    int ge[3];
    double sg[3];
    for (int k = 0; k < 3; ++k) {
      ge[k] = m.he_edge[hs[k]];
      sg[k] = m.he_sign(hs[k]);
    }
    for (int k = 0; k < 3; ++k) dec.vertex_area[m.faces[f][k]] += g.area / 3.0;

    // cotangent at the corner opposite each edge
    const int opp[3] = {2, 0, 1};
    for (int k = 0; k < 3; ++k) {
      int o = opp[k];
      Eigen::Vector2d u = g.p[(o + 1) % 3] - g.p[o], v = g.p[(o + 2) % 3] - g.p[o];
      double cross = u.x() * v.y() - u.y() * v.x();
      dec.w1[ge[k]] += 0.5 * u.dot(v) / std::abs(cross);
    }

    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        tm.emplace_back(ge[r], ge[c], sg[r] * sg[c] * g.mass(r, c));

    // int_T W_a ^ W_b = area-free constant pattern, +1/6 on cyclic pairs
    const double K[3][3] = {{0, 1. / 6, -1. / 6}, {-1. / 6, 0, 1. / 6}, {1. / 6, -1. / 6, 0}};
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        if (K[r][c] != 0)
          tw.emplace_back(ge[r], ge[c], sg[r] * sg[c] * K[r][c]);

    // face-averaged Whitney rotation: integrate J(interpolated form) along
    // each edge, affine forms are exact at midpoints
    const int tail[3] = {0, 1, 2}, head[3] = {1, 2, 0};
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector2d mid = 0.5 * (g.p[tail[k]] + g.p[head[k]]);
      Eigen::Vector2d ev = g.p[head[k]] - g.p[tail[k]];
      double lam[3];
      for (int i = 0; i < 3; ++i)
        lam[i] = (i == tail[k] || i == head[k]) ? 0.5 : 0.0;
      for (int j = 0; j < 3; ++j) {
        Eigen::Vector2d wj = lam[tail[j]] * g.grad[head[j]] - lam[head[j]] * g.grad[tail[j]];
        Eigen::Vector2d rot(-wj.y(), wj.x());
        double val = 0.5 * sg[k] * sg[j] * rot.dot(ev);
        if (val != 0) tr.emplace_back(ge[k], ge[j], val);
      }
    }
    dec.fgeom[f] = g;
  }
  dec.mass1.resize(E, E);
  dec.mass1.setFromTriplets(tm.begin(), tm.end());
  dec.wedge1.resize(E, E);
  dec.wedge1.setFromTriplets(tw.begin(), tw.end());
  dec.star1.resize(E, E);
  dec.star1.setFromTriplets(tr.begin(), tr.end());
  dec.laplacian0 = dec.d0.transpose() * dec.w1.asDiagonal() * dec.d0;
  return dec;
}

// int alpha ^ beta over the whole surface (complex-bilinear in both slots).
template <class VecA, class VecB>
auto wedge_integral(const TriMesh& m, const DecOperators& dec, const VecA& a,
                    const VecB& b) {
  if (a.size() != m.ne() || b.size() != m.ne())
    throw std::invalid_argument("wedge_integral: cochains do not match mesh");
  using S = decltype(typename VecA::Scalar() * typename VecB::Scalar());
  S total(0);
  // grouped so that swapping the arguments negates every term bitwise
  for (long f = 0; f < m.nf(); ++f) {
    auto av = dec.local_values(m, (int)f, a);
    auto bv = dec.local_values(m, (int)f, b);
    total += ((av[0] * bv[1] - av[1] * bv[0]) + (av[1] * bv[2] - av[2] * bv[1]) +
              (av[2] * bv[0] - av[0] * bv[2])) /
             6.0;
  }
  return total;
}

// Per-face integrated wedge density of two 1-cochains (a 2-cochain).
template <class VecA, class VecB>
auto wedge_face_cochain(const TriMesh& m, const DecOperators& dec, const VecA& a,
                        const VecB& b) {
  using S = decltype(typename VecA::Scalar() * typename VecB::Scalar());
  Eigen::Vector<S, Eigen::Dynamic> out(m.nf());
  for (long f = 0; f < m.nf(); ++f) {
    auto av = dec.local_values(m, (int)f, a);
    auto bv = dec.local_values(m, (int)f, b);
    out[f] = ((av[0] * bv[1] - av[1] * bv[0]) + (av[1] * bv[2] - av[2] * bv[1]) +
              (av[2] * bv[0] - av[0] * bv[2])) /
             6.0;
  }
  return out;
}

// Spread integrated face values to vertex loads (hat-average adjoint).
template <class Vec>
auto spread_to_vertices(const TriMesh& m, const Vec& face_vals) {
  Eigen::Vector<typename Vec::Scalar, Eigen::Dynamic> out =
      Eigen::Vector<typename Vec::Scalar, Eigen::Dynamic>::Zero(m.nv());
  for (long f = 0; f < m.nf(); ++f)
    for (int k = 0; k < 3; ++k) out[m.faces[f][k]] += face_vals[f] / 3.0;
  return out;
}

}  // namespace arasurf
