#pragma once

// Surface constructions: flat tori and hyperelliptic double covers.
//
// Every target quantity downstream is a conformal invariant, so any mesh
// metric realizing the intended conformal class is valid. The torus carries
// the exact flat metric of C/(Z + tau Z). The double cover lifts the round
// metric of the base sphere, encoded through chordal edge lengths of the
// stereographic chart; near a branch vertex the two sheets contribute a
// total cone angle of 4*pi, which is the correct conformal picture for a
// square-root ramification point.

#include "arasurf/mesh.hpp"

#include <limits>
#include <numeric>
#include <queue>
#include <set>

namespace arasurf {

inline TriMesh build_flat_torus(cplx tau, int n) {
  if (!(tau.imag() > 0.0))
    throw std::invalid_argument("torus modulus must have positive imaginary part");
  if (n < 4) throw std::invalid_argument("torus resolution must be at least 4");

  auto vid = [n](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };
  std::vector<cplx> chart(n * (long)n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      chart[vid(i, j)] = cplx((double)i / n, 0) + (double)j / n * tau;

  // Cell (i,j) split along the (i,j)->(i+1,j+1) diagonal.
  std::vector<std::array<int, 3>> faces;
  faces.reserve(2 * (long)n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int a = vid(i, j), b = vid(i + 1, j), c = vid(i, j + 1), d = vid(i + 1, j + 1);
      faces.push_back({a, b, d});
      faces.push_back({a, d, c});
    }

  // Exact flat lengths: each edge is one of the three lattice steps.
  double lh = 1.0 / n, lv = std::abs(tau) / n, ld = std::abs(1.0 + tau) / n;
  auto edges = TriMesh::collect_edges(n * (long)n, faces);
  std::vector<double> len(edges.size());
  for (size_t e = 0; e < edges.size(); ++e) {
    int u = edges[e].first, v = edges[e].second;
    int iu = u / n, ju = u % n, iv = v / n, jv = v % n;
    int di = std::abs(iu - iv), dj = std::abs(ju - jv);
    di = std::min(di, n - di);
    dj = std::min(dj, n - dj);
    if (di == 1 && dj == 0) len[e] = lh;
    else if (di == 0 && dj == 1) len[e] = lv;
    else len[e] = ld;
  }
  TriMesh m = TriMesh::build(std::move(chart), std::move(faces), std::move(len), 1);
  return m;
}

namespace detail {

// Base sphere: uniform grid over a square containing the (normalized) branch
// points, closed up with geometric rings and an apex at infinity. All edge
// lengths are chordal distances under stereographic projection, so the
// discrete conformal structure converges to the round sphere with the branch
// points at their exact chart positions.
struct SphereBase {
  std::vector<cplx> chart;   // position; apex uses a large sentinel radius
  std::vector<bool> at_infinity;
  std::vector<std::array<int, 3>> faces;
  std::vector<int> branch_vertex;  // base vertex per branch point
  double grid_h = 0;
};

inline double chordal(cplx a, cplx b) {
  return 2.0 * std::abs(a - b) /
         std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

inline SphereBase build_sphere_base(const std::vector<cplx>& branch, int n) {
  SphereBase sb;
  const double L = 2.2;  // grid half-width in normalized coordinates
  const int N = n + 1;   // vertices per side
  sb.grid_h = 2 * L / n;
  auto gid = [N](int i, int j) { return i * N + j; };
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      sb.chart.push_back(cplx(-L + 2 * L * i / n, -L + 2 * L * j / n));
  sb.at_infinity.assign(sb.chart.size(), false);

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int a = gid(i, j), b = gid(i + 1, j), c = gid(i, j + 1), d = gid(i + 1, j + 1);
      sb.faces.push_back({a, b, d});
      sb.faces.push_back({a, d, c});
    }

  // Snap each branch point onto the grid: among the four corners of its cell,
  // move the one that keeps the worst incident triangle area largest. The
  // branch point then sits at its exact chart position.
  std::vector<std::vector<int>> vfaces(sb.chart.size());
  for (size_t f = 0; f < sb.faces.size(); ++f)
    for (int k = 0; k < 3; ++k) vfaces[sb.faces[f][k]].push_back((int)f);
  auto min_incident_area = [&](int v, cplx pos) {
    double worst = std::numeric_limits<double>::max();
    for (int f : vfaces[v]) {
      cplx p[3];
      for (int k = 0; k < 3; ++k)
        p[k] = sb.faces[f][k] == v ? pos : sb.chart[sb.faces[f][k]];
      cplx u = p[1] - p[0], w2 = p[2] - p[0];
      worst = std::min(worst, u.real() * w2.imag() - u.imag() * w2.real());
    }
    return worst;
  };
  // Grid adjacency, including the (+1,+1) cell diagonal of the triangulation.
  auto grid_adjacent = [N](int a, int b) {
    int ai = a / N, aj = a % N, bi = b / N, bj = b % N;
    int di = bi - ai, dj = bj - aj;
    return (std::abs(di) + std::abs(dj) == 1) || (di == dj && std::abs(di) == 1);
  };
  for (cplx w : branch) {
    int ci = std::clamp((int)std::floor((w.real() + L) / (2 * L / n)), 1, n - 2);
    int cj = std::clamp((int)std::floor((w.imag() + L) / (2 * L / n)), 1, n - 2);
    int best = -1;
    double best_q = -std::numeric_limits<double>::max();
    for (int di = 0; di <= 1; ++di)
      for (int dj = 0; dj <= 1; ++dj) {
        int v = gid(ci + di, cj + dj);
        // branch vertices must stay pairwise non-adjacent, else the sheet
        // gluing degenerates along the connecting edge
        bool blocked = false;
        for (int bv : sb.branch_vertex)
          if (bv == v || grid_adjacent(bv, v)) blocked = true;
        if (blocked) continue;
        double q = min_incident_area(v, w);
        if (q > best_q + 1e-18) { best_q = q; best = v; }
      }
    if (best < 0 || best_q <= 0)
      throw std::invalid_argument(
          "branch points closer than the mesh scale (cannot snap without degeneracy)");
    sb.branch_vertex.push_back(best);
    sb.chart[best] = w;
  }

  // Boundary ring of the square, ccw starting at the (0,0) corner.
  std::vector<int> ring;
  for (int i = 0; i < n; ++i) ring.push_back(gid(i, 0));
  for (int j = 0; j < n; ++j) ring.push_back(gid(n, j));
  for (int i = n; i > 0; --i) ring.push_back(gid(i, n));
  for (int j = n; j > 0; --j) ring.push_back(gid(0, j));

  // Geometric rings out to a large radius, then an apex at infinity. The far
  // region is deliberately coarse: no branch points live there and the
  // holomorphic densities decay fast, chordal lengths keep the triangles in
  // the round conformal class.
  const int K = 6;
  const double R_far = 40.0;
  std::vector<int> prev = ring;
  double r0 = L * std::sqrt(2.0);
  for (int k = 1; k <= K; ++k) {
    double r = r0 * std::pow(R_far / r0, (double)k / K);
    std::vector<int> cur;
    for (size_t t = 0; t < prev.size(); ++t) {
      double ang = std::arg(sb.chart[prev[t]]);
      cur.push_back((int)sb.chart.size());
      sb.chart.push_back(std::polar(r, ang));
      sb.at_infinity.push_back(false);
    }
    for (size_t t = 0; t < prev.size(); ++t) {
      size_t s = (t + 1) % prev.size();
      sb.faces.push_back({prev[t], cur[s], prev[s]});
      sb.faces.push_back({prev[t], cur[t], cur[s]});
    }
    prev = cur;
  }
  int apex = (int)sb.chart.size();
  sb.chart.push_back(cplx(0, 0));  // position unused; flagged as infinity
  sb.at_infinity.push_back(true);
  for (size_t t = 0; t < prev.size(); ++t) {
    size_t s = (t + 1) % prev.size();
    sb.faces.push_back({prev[s], prev[t], apex});
  }
  return sb;
}

inline double sphere_edge_length(const SphereBase& sb, int u, int v) {
  if (sb.at_infinity[u] && sb.at_infinity[v])
    throw std::logic_error("edge between two infinite vertices");
  if (sb.at_infinity[u]) return 2.0 / std::sqrt(1.0 + std::norm(sb.chart[v]));
  if (sb.at_infinity[v]) return 2.0 / std::sqrt(1.0 + std::norm(sb.chart[u]));
  return chordal(sb.chart[u], sb.chart[v]);
}

// Vertex-disjoint shortest cut paths between consecutive branch pairs,
// Dijkstra over chordal lengths with (distance, vertex) tie-breaking.
inline std::vector<std::vector<int>> cut_paths(
    const SphereBase& sb, const std::vector<std::pair<int, int>>& pairs) {
  const long V = (long)sb.chart.size();
  // adjacency
  std::vector<std::vector<std::pair<int, double>>> adj(V);
  {
    auto edges = TriMesh::collect_edges(V, sb.faces);
    for (auto [u, v] : edges) {
      double l = sphere_edge_length(sb, u, v);
      adj[u].push_back({v, l});
      adj[v].push_back({u, l});
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
  }
  std::vector<bool> blocked(V, false);
  for (const auto& [a, b] : pairs) { blocked[a] = true; blocked[b] = true; }

  std::vector<std::vector<int>> paths;
  for (const auto& [src, dst] : pairs) {
    std::vector<double> dist(V, std::numeric_limits<double>::max());
    std::vector<int> par(V, -1);
    using Node = std::pair<double, int>;
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> pq;
    dist[src] = 0;
    pq.push({0, src});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      if (u == dst) break;
      for (auto [v, l] : adj[u]) {
        if (blocked[v] && v != dst) continue;  // keep paths vertex-disjoint
        if (dist[u] + l < dist[v] - 1e-15) {
          dist[v] = dist[u] + l;
          par[v] = u;
          pq.push({dist[v], v});
        }
      }
    }
    if (par[dst] < 0 && src != dst)
      throw std::runtime_error("could not route a cut path between branch points");
    std::vector<int> path;
    for (int v = dst; v != -1; v = par[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    for (int v : path) blocked[v] = true;
    paths.push_back(std::move(path));
  }
  return paths;
}

}  // namespace detail

// Double cover of the sphere branched over the given points. The cover is the
// two-sheeted combinatorial cover with sheet exchange across the cut paths;
// cover vertices are orbits of face corners under the gluing, which makes the
// branch vertices single and everything else doubled.
inline TriMesh build_hyperelliptic_cover(std::vector<cplx> branch_points, int n) {
  const size_t B = branch_points.size();
  if (B < 6 || B % 2 != 0)
    throw std::invalid_argument("need an even number (>= 6) of branch points");
  if (n < 8) throw std::invalid_argument("cover resolution must be at least 8");
  {
    std::vector<cplx> s = branch_points;
    for (size_t i = 0; i < B; ++i)
      for (size_t j = i + 1; j < B; ++j)
        if (std::abs(s[i] - s[j]) == 0.0)
          throw std::invalid_argument("coincident branch points");
  }

  // Normalize to the unit disk (a Moebius rescaling; conformal invariants
  // are unchanged). Deterministic lexicographic order fixes the pairing.
  cplx center(0, 0);
  for (cplx b : branch_points) center += b;
  center /= (double)B;
  double scale = 0;
  for (cplx b : branch_points) scale = std::max(scale, std::abs(b - center));
  if (scale == 0) throw std::invalid_argument("branch points all coincide");
  std::vector<cplx> w(B);
  for (size_t i = 0; i < B; ++i) w[i] = (branch_points[i] - center) / scale;
  std::sort(w.begin(), w.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  double minsep = std::numeric_limits<double>::max();
  for (size_t i = 0; i < B; ++i)
    for (size_t j = i + 1; j < B; ++j)
      minsep = std::min(minsep, std::abs(w[i] - w[j]));
  const double grid_h = 2 * 2.2 / n;
  if (minsep <= 2.5 * grid_h)
    throw std::invalid_argument(
        "branch points closer than the mesh scale; minimum admissible separation is " +
        std::to_string(2.5 * grid_h * scale) + " (chart units; raise the resolution)");
  detail::SphereBase sb = detail::build_sphere_base(w, n);

  std::vector<std::pair<int, int>> pairs;
  for (size_t k = 0; k + 1 < B; k += 2)
    pairs.push_back({sb.branch_vertex[k], sb.branch_vertex[k + 1]});
  auto paths = detail::cut_paths(sb, pairs);

  // Mark cut edges.
  auto edges = TriMesh::collect_edges((long)sb.chart.size(), sb.faces);
  std::map<std::pair<int, int>, int> eidx;
  for (size_t e = 0; e < edges.size(); ++e) eidx[edges[e]] = (int)e;
  std::vector<char> cut(edges.size(), 0);
  for (const auto& p : paths)
    for (size_t t = 0; t + 1 < p.size(); ++t) {
      auto key = std::make_pair(std::min(p[t], p[t + 1]), std::max(p[t], p[t + 1]));
      cut[eidx.at(key)] = 1;
    }

  // Corners of the doubled faces, glued across edges (sheet flip on cuts).
  const long F = (long)sb.faces.size();
  auto corner_id = [&](long f, int k, int s) { return 2 * (3 * f + k) + s; };
  std::vector<int> uf(6 * F);
  std::iota(uf.begin(), uf.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  auto unite = [&](int a, int b) { uf[find(a)] = find(b); };

  // Halfedge structure of the base to find shared edges.
  std::map<std::pair<int, int>, std::pair<long, int>> half;  // (u,v) -> (face, corner)
  for (long f = 0; f < F; ++f)
    for (int k = 0; k < 3; ++k)
      half[{sb.faces[f][k], sb.faces[f][(k + 1) % 3]}] = {f, k};
  for (const auto& [uv, fk] : half) {
    auto [u, v] = uv;
    if (u > v) continue;
    auto [f1, k1] = fk;
    auto [f2, k2] = half.at({v, u});
    int flip = cut[eidx.at({u, v})];
    for (int s = 0; s < 2; ++s) {
      int s2 = s ^ flip;
      // corner at u: (f1,k1) tail; in f2 the tail of (v,u) is k2, head at (k2+1)%3
      unite(corner_id(f1, k1, s), corner_id(f2, (k2 + 1) % 3, s2));
      unite(corner_id(f1, (k1 + 1) % 3, s), corner_id(f2, k2, s2));
    }
  }

  // Number cover vertices by first appearance in face order.
  std::vector<int> vname(6 * F, -1);
  std::vector<cplx> cchart;
  std::vector<bool> cinf;
  std::vector<int> base_of;
  int nextv = 0;
  std::vector<std::array<int, 3>> cfaces(2 * F);
  for (int s = 0; s < 2; ++s)
    for (long f = 0; f < F; ++f) {
      std::array<int, 3> tri;
      for (int k = 0; k < 3; ++k) {
        int r = find(corner_id(f, k, s));
        if (vname[r] < 0) {
          vname[r] = nextv++;
          cchart.push_back(sb.chart[sb.faces[f][k]]);
          cinf.push_back(sb.at_infinity[sb.faces[f][k]]);
          base_of.push_back(sb.faces[f][k]);
        }
        tri[k] = vname[r];
      }
      cfaces[s * F + f] = tri;
    }

#ifdef ARASURF_DEBUG_COVER
  {
    std::map<std::pair<int, int>, int> dcnt;
    for (const auto& cf : cfaces)
      for (int k = 0; k < 3; ++k) dcnt[{cf[k], cf[(k + 1) % 3]}]++;
    for (const auto& [de, cnt] : dcnt)
      if (cnt > 1)
        fprintf(stderr, "dup directed %d->%d (base %d->%d) x%d\n", de.first,
                de.second, base_of[de.first], base_of[de.second], cnt);
  }
#endif
  auto cedges = TriMesh::collect_edges(nextv, cfaces);
  std::vector<double> clen(cedges.size());
  for (size_t e = 0; e < cedges.size(); ++e)
    clen[e] = detail::sphere_edge_length(sb, base_of[cedges[e].first],
                                         base_of[cedges[e].second]);

  int genus = (int)(B - 2) / 2;
  TriMesh m = TriMesh::build(std::move(cchart), std::move(cfaces), std::move(clen), genus);

  // Sheet exchange as a vertex permutation.
  std::vector<int> iota(nextv, -1);
  for (int s = 0; s < 2; ++s)
    for (long f = 0; f < F; ++f)
      for (int k = 0; k < 3; ++k) {
        int a = vname[find(corner_id(f, k, s))];
        int b = vname[find(corner_id(f, k, 1 - s))];
        iota[a] = b;
      }
  m.involution = iota;
  for (int bv : sb.branch_vertex)
    for (long v = 0; v < m.nv(); ++v)
      if (base_of[v] == bv) { m.branch_vertices.push_back((int)v); break; }
  std::sort(m.branch_vertices.begin(), m.branch_vertices.end());

  ValidationReport rep = m.validate();
  if (!rep.ok()) throw std::runtime_error("cover construction failed validation");
  return m;
}

}  // namespace arasurf
