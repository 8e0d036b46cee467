#pragma once

// Halfedge triangle mesh with an intrinsic metric (per-edge lengths).
// The surface is always closed and oriented; faces are stored as
// counterclockwise vertex triples. The metric is intrinsic: edge lengths
// are authoritative, vertex chart positions are bookkeeping (branch point
// markers, singularity splitting, diagnostics).

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arasurf {

using cplx = std::complex<double>;

struct ValidationReport {
  long euler_characteristic = 0;
  int genus_from_euler = -1;
  bool edges_two_faces = false;     // every undirected edge bordered by exactly two faces
  bool orientation_consistent = false; // each directed edge traversed exactly once
  bool connected = false;
  bool involution_order_two = true; // vacuously true without involution
  bool involution_simplicial = true;
  long involution_fixed_points = 0;
  bool branch_matches_fixed = true;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

// Connectivity-level validation of a face soup. Cheap, never throws.
ValidationReport validate_soup(long n_vertices,
                               const std::vector<std::array<int, 3>>& faces);

class TriMesh {
 public:
  // Halfedge h runs tail(h) -> head(h). Twins pair the two directions of an
  // edge, next cycles ccw inside a face. Edge e is canonically directed from
  // the smaller to the larger vertex id; edges are numbered lexicographically
  // by (min,max) id so that all derived orderings are deterministic.
  std::vector<int> he_head, he_twin, he_next, he_face, he_edge;
  std::vector<int> face_he;    // one halfedge per face (first of the stored triple)
  std::vector<int> vertex_he;  // one outgoing halfedge per vertex
  std::vector<int> edge_he;    // halfedge running in the canonical direction

  std::vector<cplx> chart;                  // chart position per vertex
  std::vector<std::array<int, 3>> faces;    // ccw triples
  std::vector<double> edge_length;
  int genus = 0;

  std::optional<std::vector<int>> involution;  // order-2 vertex permutation
  std::vector<int> branch_vertices;

  long nv() const { return (long)chart.size(); }
  long ne() const { return (long)edge_length.size(); }
  long nf() const { return (long)faces.size(); }
  long nh() const { return (long)he_head.size(); }

  int he_tail(int h) const { return he_head[he_twin[h]]; }
  // Sign of halfedge h relative to the canonical direction of its edge.
  double he_sign(int h) const { return edge_he[he_edge[h]] == h ? 1.0 : -1.0; }

  // Edge lengths of face f in the order (v0v1, v1v2, v2v0).
  std::array<double, 3> face_lengths(int f) const {
    int h0 = face_he[f], h1 = he_next[h0], h2 = he_next[h1];
    return {edge_length[he_edge[h0]], edge_length[he_edge[h1]],
            edge_length[he_edge[h2]]};
  }

  std::array<int, 3> face_halfedges(int f) const {
    int h0 = face_he[f], h1 = he_next[h0], h2 = he_next[h1];
    return {h0, h1, h2};
  }

  // Outgoing halfedges of v in no particular angular order.
  std::vector<int> vertex_star(int v) const {
    std::vector<int> out;
    int h0 = vertex_he[v], h = h0;
    do {
      out.push_back(h);
      h = he_next[he_twin[h]];
    } while (h != h0);
    return out;
  }

  static TriMesh build(std::vector<cplx> chart,
                       std::vector<std::array<int, 3>> faces,
                       std::vector<double> edge_lengths_canonical,
                       int genus_hint = -1);

  // Lengths derived from chart positions (only valid without wraparound).
  static TriMesh build_from_chart(std::vector<cplx> chart,
                                  std::vector<std::array<int, 3>> faces);

  // Canonical edge list as (min,max) pairs, lex sorted; shared with builders
  // and the serializer.
  static std::vector<std::pair<int, int>> collect_edges(
      long n_vertices, const std::vector<std::array<int, 3>>& faces);

  ValidationReport validate() const;
};

inline std::vector<std::pair<int, int>> TriMesh::collect_edges(
    long n_vertices, const std::vector<std::array<int, 3>>& faces) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(faces.size() * 3 / 2);
  for (const auto& f : faces)
    for (int k = 0; k < 3; ++k) {
      int a = f[k], b = f[(k + 1) % 3];
      if (a < 0 || b < 0 || a >= n_vertices || b >= n_vertices)
        throw std::invalid_argument("face references vertex out of range");
      if (a < b) edges.emplace_back(a, b);
    }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

inline ValidationReport validate_soup(
    long n_vertices, const std::vector<std::array<int, 3>>& faces) {
  ValidationReport rep;
  std::map<std::pair<int, int>, int> directed;  // directed edge -> count
  bool in_range = true;
  for (const auto& f : faces)
    for (int k = 0; k < 3; ++k) {
      int a = f[k], b = f[(k + 1) % 3];
      if (a < 0 || b < 0 || a >= n_vertices || b >= n_vertices || a == b) {
        in_range = false;
        continue;
      }
      directed[{a, b}]++;
    }
  if (!in_range) rep.failures.push_back("face with out-of-range or repeated vertex");

  rep.orientation_consistent = true;
  rep.edges_two_faces = true;
  long n_undirected = 0;
  for (const auto& [de, cnt] : directed) {
    if (cnt != 1) rep.orientation_consistent = false;
    if (de.first < de.second) {
      ++n_undirected;
      auto it = directed.find({de.second, de.first});
      int back = it == directed.end() ? 0 : it->second;
      if (cnt + back != 2) rep.edges_two_faces = false;
    } else if (directed.find({de.second, de.first}) == directed.end()) {
      ++n_undirected;  // only the reversed copy exists
      rep.edges_two_faces = false;
    }
  }
  if (!rep.orientation_consistent)
    rep.failures.push_back("orientation: some directed edge traversed twice");
  if (!rep.edges_two_faces)
    rep.failures.push_back("manifoldness: some edge not bordered by exactly two faces");

  rep.euler_characteristic = n_vertices - n_undirected + (long)faces.size();
  if ((2 - rep.euler_characteristic) % 2 == 0 && rep.euler_characteristic <= 2)
    rep.genus_from_euler = (int)((2 - rep.euler_characteristic) / 2);
  else
    rep.failures.push_back("Euler characteristic is not of the form 2-2g");

  // Connectivity over vertices via union-find.
  std::vector<int> parent(n_vertices);
  for (long i = 0; i < n_vertices; ++i) parent[i] = (int)i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& f : faces)
    for (int k = 0; k < 3; ++k) {
      int a = find(f[k]), b = find(f[(k + 1) % 3]);
      if (a != b) parent[a] = b;
    }
  long comps = 0;
  for (long i = 0; i < n_vertices; ++i)
    if (find((int)i) == i) ++comps;
  rep.connected = comps == 1;
  if (!rep.connected) rep.failures.push_back("mesh is not connected");
  return rep;
}

inline TriMesh TriMesh::build(std::vector<cplx> chart,
                              std::vector<std::array<int, 3>> faces,
                              std::vector<double> edge_lengths_canonical,
                              int genus_hint) {
  const long V = (long)chart.size();
  ValidationReport rep = validate_soup(V, faces);
  if (!rep.ok()) {
    std::string msg = "invalid mesh:";
    for (const auto& s : rep.failures) msg += " " + s + ";";
    throw std::invalid_argument(msg);
  }

  TriMesh m;
  m.chart = std::move(chart);
  m.faces = std::move(faces);
  auto edges = collect_edges(V, m.faces);
  const long E = (long)edges.size();
  if ((long)edge_lengths_canonical.size() != E)
    throw std::invalid_argument("edge length count does not match edge count");
  for (double l : edge_lengths_canonical)
    if (!(l > 0.0)) throw std::invalid_argument("non-positive edge length");
  m.edge_length = std::move(edge_lengths_canonical);

  std::map<std::pair<int, int>, int> edge_index;
  for (long e = 0; e < E; ++e) edge_index[edges[e]] = (int)e;

  const long F = (long)m.faces.size();
  m.he_head.resize(3 * F);
  m.he_twin.assign(3 * F, -1);
  m.he_next.resize(3 * F);
  m.he_face.resize(3 * F);
  m.he_edge.resize(3 * F);
  m.face_he.resize(F);
  m.vertex_he.assign(V, -1);
  m.edge_he.assign(E, -1);

  std::map<std::pair<int, int>, int> he_of;
  for (long f = 0; f < F; ++f) {
    const auto& fv = m.faces[f];
    m.face_he[f] = (int)(3 * f);
    for (int k = 0; k < 3; ++k) {
      int h = (int)(3 * f + k);
      int a = fv[k], b = fv[(k + 1) % 3];
      m.he_head[h] = b;
      m.he_next[h] = (int)(3 * f + (k + 1) % 3);
      m.he_face[h] = (int)f;
      int e = edge_index.at({std::min(a, b), std::max(a, b)});
      m.he_edge[h] = e;
      if (a < b) m.edge_he[e] = h;
      he_of[{a, b}] = h;
      if (m.vertex_he[a] < 0) m.vertex_he[a] = h;
    }
  }
  for (long f = 0; f < F; ++f)
    for (int k = 0; k < 3; ++k) {
      int h = (int)(3 * f + k);
      int a = m.faces[f][k], b = m.faces[f][(k + 1) % 3];
      m.he_twin[h] = he_of.at({b, a});
    }
  for (long e = 0; e < E; ++e)
    if (m.edge_he[e] < 0) m.edge_he[e] = m.he_twin[he_of.at({edges[e].second, edges[e].first})];

  m.genus = rep.genus_from_euler;
  if (genus_hint >= 0 && genus_hint != m.genus)
    throw std::invalid_argument("genus hint does not match Euler characteristic");

  // Triangle inequality with slack; callers constructing a metric are
  // expected to provide realizable lengths.
  for (long f = 0; f < F; ++f) {
    auto l = m.face_lengths((int)f);
    double s = (l[0] + l[1] + l[2]) / 2;
    double a2 = s * (s - l[0]) * (s - l[1]) * (s - l[2]);
    if (!(a2 > 0))
      throw std::invalid_argument("degenerate triangle (zero area) in metric");
  }
  return m;
}

inline TriMesh TriMesh::build_from_chart(std::vector<cplx> chart,
                                         std::vector<std::array<int, 3>> faces) {
  auto edges = collect_edges((long)chart.size(), faces);
  std::vector<double> len(edges.size());
  for (size_t e = 0; e < edges.size(); ++e)
    len[e] = std::abs(chart[edges[e].first] - chart[edges[e].second]);
  return build(std::move(chart), std::move(faces), std::move(len));
}

inline ValidationReport TriMesh::validate() const {
  ValidationReport rep = validate_soup(nv(), faces);
  if (involution) {
    const auto& iota = *involution;
    if ((long)iota.size() != nv()) {
      rep.involution_order_two = false;
      rep.failures.push_back("involution has wrong size");
    } else {
      long fixed = 0;
      for (long v = 0; v < nv(); ++v) {
        int w = iota[v];
        if (w < 0 || w >= nv() || iota[w] != (int)v) rep.involution_order_two = false;
        if (w == (int)v) ++fixed;
      }
      rep.involution_fixed_points = fixed;
      if (!rep.involution_order_two)
        rep.failures.push_back("involution is not an order-2 permutation");
      // Simplicial: the image of every face is a face (up to rotation).
      std::map<std::array<int, 3>, int> face_set;
      auto key = [](std::array<int, 3> t) {
        int k = (int)(std::min_element(t.begin(), t.end()) - t.begin());
        return std::array<int, 3>{t[k], t[(k + 1) % 3], t[(k + 2) % 3]};
      };
      for (const auto& f : faces) face_set[key(f)] = 1;
      rep.involution_simplicial = true;
      for (const auto& f : faces) {
        std::array<int, 3> g{iota[f[0]], iota[f[1]], iota[f[2]]};
        if (!face_set.count(key(g))) rep.involution_simplicial = false;
      }
      if (!rep.involution_simplicial)
        rep.failures.push_back("involution is not simplicial");
      std::vector<int> sorted_fixed;
      for (long v = 0; v < nv(); ++v)
        if (iota[v] == (int)v) sorted_fixed.push_back((int)v);
      std::vector<int> sb = branch_vertices;
      std::sort(sb.begin(), sb.end());
      rep.branch_matches_fixed = sb == sorted_fixed;
      if (!rep.branch_matches_fixed)
        rep.failures.push_back("involution fixed points differ from branch markers");
    }
  }
  return rep;
}

}  // namespace arasurf
