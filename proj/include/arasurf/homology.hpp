#pragma once

// Integral homology of the surface: tree-cotree generators, the intersection
// form computed exactly over Z through simplicial cup products of the dual
// cocycle basis, and integer symplectic reduction.
//
// All arithmetic in this header is exact (int64). Loops are based edge paths
// through the tree root so that integer recombinations concatenate to single
// based loops, which the iterated-integral machinery needs later.

#include "arasurf/mesh.hpp"

#include <cstdlib>

namespace arasurf {

using IMat = std::vector<std::vector<long long>>;

struct HomologyBasis {
  // loops[k]: closed edge path as a halfedge sequence, based at `root`
  std::vector<std::vector<int>> loops;
  IMat intersection;  // 2g x 2g, skew, unimodular
  int root = 0;
  // integer cocycle basis (values per canonical edge) with unimodular
  // Kronecker pairing against the loops; kept for harmonic representatives
  std::vector<std::vector<long long>> cocycles;
};

namespace detail {

inline IMat imat(int n, int m) { return IMat(n, std::vector<long long>(m, 0)); }

inline IMat imul(const IMat& A, const IMat& B) {
  IMat C = imat((int)A.size(), (int)B[0].size());
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t k = 0; k < B.size(); ++k)
      if (A[i][k])
        for (size_t j = 0; j < B[0].size(); ++j) C[i][j] += A[i][k] * B[k][j];
  return C;
}

inline IMat itrans(const IMat& A) {
  IMat T = imat((int)A[0].size(), (int)A.size());
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < A[0].size(); ++j) T[j][i] = A[i][j];
  return T;
}

// Exact inverse of a unimodular integer matrix by fraction-free elimination.
inline IMat iinverse_unimodular(IMat A) {
  const int n = (int)A.size();
  IMat I = imat(n, n);
  for (int i = 0; i < n; ++i) I[i][i] = 1;
  // Gauss-Bareiss style with full pivoting on +-1 pivots when possible;
  // generic integer elimination with rational-free steps via gcd reduction.
  // For the small unimodular matrices here, plain fraction-free Gauss-Jordan
  // over long double rationals is overkill; use adjugate via LU over long
  // double and round, then verify exactly.
  std::vector<std::vector<long double>> M(n, std::vector<long double>(n)),
      R(n, std::vector<long double>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) M[i][j] = (long double)A[i][j];
    R[i][i] = 1;
  }
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (fabsl(M[r][c]) > fabsl(M[p][c])) p = r;
    if (M[p][c] == 0) throw std::invalid_argument("matrix not invertible");
    std::swap(M[p], M[c]);
    std::swap(R[p], R[c]);
    long double d = M[c][c];
    for (int j = 0; j < n; ++j) {
      M[c][j] /= d;
      R[c][j] /= d;
    }
    for (int r = 0; r < n; ++r)
      if (r != c && M[r][c] != 0) {
        long double m2 = M[r][c];
        for (int j = 0; j < n; ++j) {
          M[r][j] -= m2 * M[c][j];
          R[r][j] -= m2 * R[c][j];
        }
      }
  }
  IMat inv = imat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = llroundl(R[i][j]);
  // verify A * inv == I exactly
  IMat chk = imul(A, inv);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (chk[i][j] != (i == j ? 1 : 0))
        throw std::runtime_error("integer inverse verification failed (non-unimodular?)");
  return inv;
}

}  // namespace detail

// Tree-cotree homology generators with deterministic lexicographic scanning.
inline HomologyBasis homology_basis(const TriMesh& m) {
  const long V = m.nv(), E = m.ne(), F = m.nf();
  const int g2 = 2 * m.genus;

  // BFS spanning tree in the primal graph, edges scanned in id order.
  std::vector<char> in_tree(E, 0);
  std::vector<int> parent_he(V, -1), depth(V, 0), order;
  {
    std::vector<std::vector<std::pair<int, int>>> adj(V);  // (edge, halfedge from v)
    for (long e = 0; e < E; ++e) {
      int h = m.edge_he[(int)e];
      adj[m.he_tail(h)].push_back({(int)e, h});
      adj[m.he_head[h]].push_back({(int)e, m.he_twin[h]});
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    std::vector<char> seen(V, 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    for (size_t q = 0; q < queue.size(); ++q) {
      int v = queue[q];
      order.push_back(v);
      for (auto [e, h] : adj[v]) {
        int w = m.he_head[h];
        if (!seen[w]) {
          seen[w] = 1;
          in_tree[e] = 1;
          parent_he[w] = h;  // runs parent -> w
          depth[w] = depth[v] + 1;
          queue.push_back(w);
        }
      }
    }
    if ((long)queue.size() != V) throw std::invalid_argument("mesh not connected");
  }

  // BFS spanning cotree in the dual graph avoiding tree edges.
  std::vector<char> in_cotree(E, 0);
  std::vector<int> dual_parent_edge(F, -1), dual_parent(F, -1);
  {
    std::vector<char> seen(F, 0);
    std::vector<int> queue{0};
    seen[0] = 1;
    for (size_t q = 0; q < queue.size(); ++q) {
      int f = queue[q];
      auto hs = m.face_halfedges(f);
      std::array<std::pair<int, int>, 3> nb;  // (edge, neighbor face)
      for (int k = 0; k < 3; ++k)
        nb[k] = {m.he_edge[hs[k]], m.he_face[m.he_twin[hs[k]]]};
      std::sort(nb.begin(), nb.end());
      for (auto [e, f2] : nb) {
        if (in_tree[e] || seen[f2]) continue;
        seen[f2] = 1;
        in_cotree[e] = 1;
        dual_parent[f2] = f;
        dual_parent_edge[f2] = e;
        queue.push_back(f2);
      }
    }
  }

  std::vector<int> leftover;
  for (long e = 0; e < E; ++e)
    if (!in_tree[e] && !in_cotree[e]) leftover.push_back((int)e);
  if ((int)leftover.size() != g2)
    throw std::runtime_error("tree-cotree leftover count does not match 2g");

  HomologyBasis hb;
  hb.root = 0;

  auto path_from_root = [&](int v) {  // halfedges root -> v along the tree
    std::vector<int> up;
    while (parent_he[v] != -1) {
      up.push_back(parent_he[v]);
      v = m.he_tail(parent_he[v]);
    }
    std::reverse(up.begin(), up.end());
    return up;
  };

  for (int x : leftover) {
    int h = m.edge_he[x];
    int u = m.he_tail(h), v = m.he_head[h];
    std::vector<int> loop = path_from_root(u);
    loop.push_back(h);
    auto back = path_from_root(v);
    std::reverse(back.begin(), back.end());
    for (int t : back) loop.push_back(m.he_twin[t]);
    hb.loops.push_back(std::move(loop));
  }

  // Dual cocycles: for each leftover edge x the dual loop = dual edge of x
  // plus the cotree path between its two faces. Crossing an edge from the
  // face on its left (the face of the canonical halfedge) to the face on its
  // right counts +1.
  auto cross_sign = [&](int edge, int from_face) {
    return m.he_face[m.edge_he[edge]] == from_face ? 1 : -1;
  };
  for (int x : leftover) {
    std::vector<long long> z(E, 0);
    int h = m.edge_he[x];
    int fa = m.he_face[h], fb = m.he_face[m.he_twin[h]];
    // dual path fb -> root-face, reversed path fa -> root-face, plus x itself:
    // walk fa up to the dual root recording crossings with sign for direction
    // fa -> parent, walk fb up with opposite sign; the common part cancels.
    z[x] += cross_sign(x, fb);  // crossing x from fb into fa
    for (int f = fa; dual_parent[f] != -1; f = dual_parent[f])
      z[dual_parent_edge[f]] += cross_sign(dual_parent_edge[f], f);
    for (int f = fb; dual_parent[f] != -1; f = dual_parent[f])
      z[dual_parent_edge[f]] -= cross_sign(dual_parent_edge[f], f);
    hb.cocycles.push_back(std::move(z));
  }

  if (g2 == 0) {
    hb.intersection = detail::imat(0, 0);
    return hb;
  }

  // Kronecker pairing P[x][j] = <z_x, loop_j>.
  IMat P = detail::imat(g2, g2);
  for (int i = 0; i < g2; ++i)
    for (int j = 0; j < g2; ++j) {
      long long s = 0;
      for (int h : hb.loops[j])
        s += (long long)std::llround(m.he_sign(h)) * hb.cocycles[i][m.he_edge[h]];
      P[i][j] = s;
    }

  // Cup pairing Q[x][y] = sum_f sign(f) z_x(ij) z_y(jk) over ordered faces.
  IMat Q = detail::imat(g2, g2);
  for (long f = 0; f < F; ++f) {
    std::array<int, 3> vs = m.faces[f];
    // order the simplex [i<j<k]; sign relative to the stored ccw orientation
    std::array<int, 3> s = vs;
    std::sort(s.begin(), s.end());
    int sign = 1;
    // parity of the permutation taking vs (cyclic class) to sorted order
    if (!(vs[0] == s[0] && vs[1] == s[1] && vs[2] == s[2]) &&
        !(vs[0] == s[1] && vs[1] == s[2] && vs[2] == s[0]) &&
        !(vs[0] == s[2] && vs[1] == s[0] && vs[2] == s[1]))
      sign = -1;
    // edge [s0,s1] directed s0->s1 is the canonical direction (s0 < s1)
    auto edge_of = [&](int a, int b) {
      for (int h : m.face_halfedges((int)f))
        if ((m.he_tail(h) == a && m.he_head[h] == b) ||
            (m.he_tail(h) == b && m.he_head[h] == a))
          return m.he_edge[h];
      throw std::logic_error("edge lookup failed");
    };
    int e01 = edge_of(s[0], s[1]), e12 = edge_of(s[1], s[2]);
    for (int x = 0; x < g2; ++x) {
      long long zx = hb.cocycles[x][e01];
      if (!zx) continue;
      for (int y = 0; y < g2; ++y)
        Q[x][y] += sign * zx * hb.cocycles[y][e12];
    }
  }

  // Intersection matrix of the loops: M = -P^T Q^{-1} P (exact integers).
  IMat Qi = detail::iinverse_unimodular(Q);
  IMat M = detail::imul(detail::imul(detail::itrans(P), Qi), P);
  for (auto& row : M)
    for (auto& v : row) v = -v;
  hb.intersection = std::move(M);
  return hb;
}

// Integer symplectic reduction: returns U (rows = new basis in terms of the
// old) with U M U^T equal to the standard block form [[0,I],[-I,0]].
inline IMat symplectic_reduce_matrix(IMat M) {
  const int n = (int)M.size();
  if (n % 2) throw std::invalid_argument("odd rank skew form");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (M[i][j] != -M[j][i]) throw std::invalid_argument("matrix not skew");
  IMat U = detail::imat(n, n);
  for (int i = 0; i < n; ++i) U[i][i] = 1;

  auto row_op = [&](int dst, int src, long long c) {  // row dst += c*row src, same for cols
    for (int j = 0; j < n; ++j) M[dst][j] += c * M[src][j];
    for (int j = 0; j < n; ++j) M[j][dst] += c * M[j][src];
    for (int j = 0; j < n; ++j) U[dst][j] += c * U[src][j];
  };
  auto swap_rc = [&](int a, int b) {
    std::swap(M[a], M[b]);
    for (int j = 0; j < n; ++j) std::swap(M[j][a], M[j][b]);
    std::swap(U[a], U[b]);
  };

  for (int k = 0; k < n; k += 2) {
    while (true) {
      // smallest nonzero |entry| in the trailing block, ties by index
      int pi = -1, pj = -1;
      long long best = 0;
      for (int i = k; i < n; ++i)
        for (int j = k; j < n; ++j)
          if (M[i][j] != 0 && (pi < 0 || std::llabs(M[i][j]) < best)) {
            best = std::llabs(M[i][j]);
            pi = i;
            pj = j;
          }
      if (pi < 0) throw std::invalid_argument("degenerate skew form");
      if (pi != k) swap_rc(pi, k);
      if (pj == k) pj = pi;  // moved by the swap
      if (pj != k + 1) swap_rc(pj, k + 1);
      long long p = M[k][k + 1];
      if (p < 0) { swap_rc(k, k + 1); p = -p; }

      // clear the rest of rows k, k+1 by division; restart on a remainder
      bool clean = true;
      for (int j = k + 2; j < n && clean; ++j) {
        if (M[k][j] % p || M[k + 1][j] % p) { clean = false; break; }
      }
      if (!clean) {
        // reduce the offending entries, the minimum strictly decreases
        for (int j = k + 2; j < n; ++j) {
          if (M[k][j]) row_op(j, k + 1, -(M[k][j] / p) * 1);
          if (M[k + 1][j]) row_op(j, k, M[k + 1][j] / p);
        }
        continue;
      }
      for (int j = k + 2; j < n; ++j) {
        // entries M[k][j] live in column j: row_j -= (M[k][j]/p) * row_{k+1}
        // changes M[k][j] by -(M[k][j]/p)*M[k][k+1]
        if (M[k][j]) row_op(j, k + 1, -M[k][j] / p);
        if (M[k + 1][j]) row_op(j, k, M[k + 1][j] / p);
      }
      if (p != 1)
        throw std::invalid_argument("skew form is not unimodular (pivot != 1)");
      bool done = true;
      for (int j = k + 2; j < n; ++j)
        if (M[k][j] || M[k + 1][j]) done = false;
      if (done) break;
    }
  }

  // Interleaved (a1,b1,a2,b2,...) -> (a1..ag, b1..bg).
  IMat Up = detail::imat(n, n);
  IMat Mp = detail::imat(n, n);
  std::vector<int> perm(n);
  for (int k = 0; k < n / 2; ++k) {
    perm[k] = 2 * k;
    perm[n / 2 + k] = 2 * k + 1;
  }
  for (int i = 0; i < n; ++i) Up[i] = U[perm[i]];
  return Up;
}

// Apply the reduction to a basis: loops are recombined as concatenations of
// (possibly reversed) generators, all still based at the root.
inline HomologyBasis symplectic_reduce(const TriMesh& m, const HomologyBasis& hb) {
  const int n = (int)hb.loops.size();
  IMat U = symplectic_reduce_matrix(hb.intersection);
  HomologyBasis out;
  out.root = hb.root;
  out.intersection = detail::imul(detail::imul(U, hb.intersection), detail::itrans(U));
  for (int i = 0; i < n; ++i) {
    std::vector<int> loop;
    for (int j = 0; j < n; ++j) {
      long long c = U[i][j];
      for (long long r = 0; r < std::llabs(c); ++r) {
        if (c > 0)
          loop.insert(loop.end(), hb.loops[j].begin(), hb.loops[j].end());
        else
          for (auto it = hb.loops[j].rbegin(); it != hb.loops[j].rend(); ++it)
            loop.push_back(m.he_twin[*it]);
      }
    }
    out.loops.push_back(std::move(loop));
  }
  // transform cocycles so that <y_i, loop'_j> = delta_ij
  if (n) {
    IMat P = detail::imat(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        long long s = 0;
        for (int h : out.loops[j])
          s += (long long)std::llround(m.he_sign(h)) * hb.cocycles[i][m.he_edge[h]];
        P[i][j] = s;
      }
    IMat C = detail::iinverse_unimodular(P);
    out.cocycles.assign(n, std::vector<long long>(m.ne(), 0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (C[i][k])
          for (long e = 0; e < m.ne(); ++e)
            out.cocycles[i][e] += C[i][k] * hb.cocycles[k][e];
  }
  return out;
}

}  // namespace arasurf
