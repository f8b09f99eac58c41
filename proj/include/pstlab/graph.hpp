#pragma once

// Simple undirected graphs on at most 62 vertices, stored as per-vertex
// neighbour bitsets, with graph6 I/O, graph matrices and structural predicates.

#include "pstlab/exact.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pstlab {

inline constexpr int kMaxVertices = 62;

using VertexSet = std::uint64_t;

class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : n_(n), adj_(static_cast<std::size_t>(n), 0) {
    if (n < 0 || n > kMaxVertices) throw std::invalid_argument("Graph: vertex count out of range 0..62");
  }
  Graph(int n, const std::vector<std::pair<int, int>>& edges) : Graph(n) {
    for (auto [u, v] : edges) connect(u, v);
  }
  /// Builds from neighbour bitsets; the relation must be symmetric and loop-free.
  static Graph from_neighbourhoods(std::vector<VertexSet> adj) {
    Graph g(static_cast<int>(adj.size()));
    for (int u = 0; u < g.n_; ++u) {
      if (adj[u] >> u & 1) throw std::invalid_argument("Graph: self-loop");
      if (g.n_ < 64 && (adj[u] >> g.n_) != 0) throw std::invalid_argument("Graph: neighbour index out of range");
    }
    for (int u = 0; u < g.n_; ++u)
      for (int v = 0; v < g.n_; ++v)
        if ((adj[u] >> v & 1) != (adj[v] >> u & 1)) throw std::invalid_argument("Graph: asymmetric adjacency");
    g.adj_ = std::move(adj);
    return g;
  }

  int order() const { return n_; }
  int size() const {
    int e = 0;
    for (VertexSet s : adj_) e += std::popcount(s);
    return e / 2;
  }
  VertexSet neighbours(int u) const { return adj_.at(u); }
  bool adjacent(int u, int v) const { return adj_.at(u) >> v & 1; }
  int degree(int u) const { return std::popcount(adj_.at(u)); }
  VertexSet all_vertices() const { return n_ == 64 ? ~VertexSet{0} : (VertexSet{1} << n_) - 1; }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> e;
    for (int v = 1; v < n_; ++v)
      for (int u = 0; u < v; ++u)
        if (adjacent(u, v)) e.emplace_back(u, v);
    return e;
  }

  /// The graph with vertex u renamed to perm[u].
  Graph relabelled(const std::vector<int>& perm) const {
    std::vector<VertexSet> adj(adj_.size(), 0);
    for (int u = 0; u < n_; ++u)
      for (int v = 0; v < n_; ++v)
        if (adjacent(u, v)) adj[perm.at(u)] |= VertexSet{1} << perm.at(v);
    return from_neighbourhoods(std::move(adj));
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void connect(int u, int v) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::invalid_argument("Graph: vertex index out of range");
    if (u == v) throw std::invalid_argument("Graph: self-loop");
    adj_[u] |= VertexSet{1} << v;
    adj_[v] |= VertexSet{1} << u;
  }

  int n_ = 0;
  std::vector<VertexSet> adj_;
};

inline bool is_connected(const Graph& g) {
  if (g.order() == 0) return true;
  VertexSet seen = 1, frontier = 1;
  while (frontier) {
    VertexSet next = 0;
    for (VertexSet f = frontier; f; f &= f - 1) next |= g.neighbours(std::countr_zero(f));
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == g.all_vertices();
}

// ---------------------------------------------------------------------------
// graph6

class Graph6Error : public std::runtime_error {
 public:
  Graph6Error(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

inline constexpr std::string_view kGraph6Header = ">>graph6<<";

inline Graph parse_graph6(std::string_view text) {
  std::size_t base = 0;
  if (text.starts_with(kGraph6Header)) base = kGraph6Header.size();
  std::string_view w = text.substr(base);
  if (w.empty()) throw Graph6Error("graph6: empty word", base);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const unsigned char ch = static_cast<unsigned char>(w[i]);
    if (ch < 63 || ch > 126) throw Graph6Error("graph6: character outside 63..126", base + i);
  }
  const int n = static_cast<unsigned char>(w[0]) - 63;
  if (n > kMaxVertices) throw Graph6Error("graph6: vertex counts above 62 are not supported", base);
  const std::size_t bits = static_cast<std::size_t>(n) * (n - 1) / 2;
  const std::size_t bytes = (bits + 5) / 6;
  if (w.size() < 1 + bytes) throw Graph6Error("graph6: word too short for " + std::to_string(n) + " vertices", base + w.size());
  if (w.size() > 1 + bytes) throw Graph6Error("graph6: trailing characters", base + 1 + bytes);
  std::vector<VertexSet> adj(static_cast<std::size_t>(n), 0);
  std::size_t k = 0;
  for (int v = 1; v < n; ++v)
    for (int u = 0; u < v; ++u, ++k) {
      const int byte = static_cast<unsigned char>(w[1 + k / 6]) - 63;
      if (byte >> (5 - k % 6) & 1) {
        adj[u] |= VertexSet{1} << v;
        adj[v] |= VertexSet{1} << u;
      }
    }
  if (bits % 6 != 0) {
    const int last = static_cast<unsigned char>(w[bytes]) - 63;
    if (last & ((1 << (6 - bits % 6)) - 1)) throw Graph6Error("graph6: nonzero padding bits", base + bytes);
  }
  return Graph::from_neighbourhoods(std::move(adj));
}

inline std::string write_graph6(const Graph& g) {
  const int n = g.order();
  if (n > kMaxVertices) throw std::invalid_argument("write_graph6: more than 62 vertices");
  std::string out(1, static_cast<char>(63 + n));
  int acc = 0, nbits = 0;
  for (int v = 1; v < n; ++v)
    for (int u = 0; u < v; ++u) {
      acc = acc << 1 | static_cast<int>(g.adjacent(u, v));
      if (++nbits == 6) {
        out.push_back(static_cast<char>(63 + acc));
        acc = nbits = 0;
      }
    }
  if (nbits) out.push_back(static_cast<char>(63 + (acc << (6 - nbits))));
  return out;
}

// ---------------------------------------------------------------------------
// Matrices

inline IntMatrix adjacency(const Graph& g) {
  const std::size_t n = g.order();
  IntMatrix a(n, n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (g.adjacent(u, v)) a(u, v) = 1;
  return a;
}

inline IntMatrix laplacian(const Graph& g) {
  const std::size_t n = g.order();
  IntMatrix l(n, n);
  for (std::size_t u = 0; u < n; ++u) {
    l(u, u) = g.degree(u);
    for (std::size_t v = 0; v < n; ++v)
      if (g.adjacent(u, v)) l(u, v) = -1;
  }
  return l;
}

inline IntMatrix signless_laplacian(const Graph& g) {
  const std::size_t n = g.order();
  IntMatrix q(n, n);
  for (std::size_t u = 0; u < n; ++u) {
    q(u, u) = g.degree(u);
    for (std::size_t v = 0; v < n; ++v)
      if (g.adjacent(u, v)) q(u, v) = 1;
  }
  return q;
}

enum class MatrixKind { Laplacian, Adjacency, SignlessLaplacian };

inline IntMatrix graph_matrix(const Graph& g, MatrixKind kind) {
  switch (kind) {
    case MatrixKind::Laplacian: return laplacian(g);
    case MatrixKind::Adjacency: return adjacency(g);
    case MatrixKind::SignlessLaplacian: return signless_laplacian(g);
  }
  throw std::invalid_argument("graph_matrix: unknown kind");
}

inline std::string to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::Laplacian: return "laplacian";
    case MatrixKind::Adjacency: return "adjacency";
    case MatrixKind::SignlessLaplacian: return "signless";
  }
  return "?";
}

inline MatrixKind parse_matrix_kind(std::string_view s) {
  if (s == "laplacian" || s == "L") return MatrixKind::Laplacian;
  if (s == "adjacency" || s == "A") return MatrixKind::Adjacency;
  if (s == "signless" || s == "signless_laplacian" || s == "Q") return MatrixKind::SignlessLaplacian;
  throw std::invalid_argument("unknown matrix kind: " + std::string(s));
}

/// Eigenvalues of the matrix lie in [-bound, bound].
inline long long spectral_bound(const Graph& g, MatrixKind kind) {
  const long long n = g.order();
  switch (kind) {
    case MatrixKind::Laplacian: return n;
    case MatrixKind::Adjacency: return n > 0 ? n - 1 : 0;
    case MatrixKind::SignlessLaplacian: return n > 0 ? 2 * (n - 1) : 0;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Twins and bipartitions

/// Vertices with N(u) \ v = N(v) \ u.
struct TwinPair {
  int u = 0, v = 0;
  bool adjacent = false;
  VertexSet common = 0;
  int k = 0;
  friend bool operator==(const TwinPair&, const TwinPair&) = default;
};

inline std::vector<TwinPair> find_twins(const Graph& g) {
  std::vector<TwinPair> out;
  for (int u = 0; u < g.order(); ++u)
    for (int v = u + 1; v < g.order(); ++v) {
      const VertexSet nu = g.neighbours(u) & ~(VertexSet{1} << v);
      const VertexSet nv = g.neighbours(v) & ~(VertexSet{1} << u);
      if (nu != nv) continue;
      out.push_back({u, v, g.adjacent(u, v), nu, std::popcount(nu)});
    }
  return out;
}

struct Bipartition {
  VertexSet class_a = 0, class_b = 0;
  bool same_class(int u, int v) const { return ((class_a >> u) & 1) == ((class_a >> v) & 1); }
};

/// Either a 2-colouring (vertex 0's component coloured from class_a) or an
/// odd closed walk witnessing non-bipartiteness.
struct BipartitionResult {
  std::optional<Bipartition> parts;
  std::vector<int> odd_cycle;
  bool bipartite() const { return parts.has_value(); }
};

inline BipartitionResult bipartition(const Graph& g) {
  const int n = g.order();
  std::vector<int> colour(n, -1), parent(n, -1);
  for (int s = 0; s < n; ++s) {
    if (colour[s] >= 0) continue;
    colour[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int x = q.front();
      q.pop();
      for (VertexSet nb = g.neighbours(x); nb; nb &= nb - 1) {
        const int y = std::countr_zero(nb);
        if (colour[y] < 0) {
          colour[y] = 1 - colour[x];
          parent[y] = x;
          q.push(y);
        } else if (colour[y] == colour[x]) {
          // Tree paths from x and y back to their common ancestor plus edge xy.
          std::vector<int> px{x}, py{y};
          while (parent[px.back()] >= 0) px.push_back(parent[px.back()]);
          while (parent[py.back()] >= 0) py.push_back(parent[py.back()]);
          while (px.size() > 1 && py.size() > 1 && px[px.size() - 2] == py[py.size() - 2]) {
            px.pop_back();
            py.pop_back();
          }
          BipartitionResult r;
          r.odd_cycle.assign(px.begin(), px.end());
          for (std::size_t i = py.size() - 1; i-- > 0;) r.odd_cycle.push_back(py[i]);
          std::reverse(r.odd_cycle.begin(), r.odd_cycle.end());
          return r;
        }
      }
    }
  }
  Bipartition b;
  for (int v = 0; v < n; ++v) (colour[v] == 0 ? b.class_a : b.class_b) |= VertexSet{1} << v;
  return {b, {}};
}

// ---------------------------------------------------------------------------
// Standard families

namespace family {

inline Graph path(int n) {
  if (n < 1) throw std::invalid_argument("path: need n >= 1");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, e);
}

inline Graph cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle: need n >= 3");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

inline Graph complete(int n) {
  if (n < 1) throw std::invalid_argument("complete: need n >= 1");
  std::vector<std::pair<int, int>> e;
  for (int v = 1; v < n; ++v)
    for (int u = 0; u < v; ++u) e.emplace_back(u, v);
  return Graph(n, e);
}

/// K_n without the edge {0, 1}.
inline Graph complete_minus_edge(int n) {
  if (n < 2) throw std::invalid_argument("complete_minus_edge: need n >= 2");
  std::vector<std::pair<int, int>> e;
  for (int v = 1; v < n; ++v)
    for (int u = 0; u < v; ++u)
      if (!(u == 0 && v == 1)) e.emplace_back(u, v);
  return Graph(n, e);
}

/// K_{1,m}, centre 0.
inline Graph star(int m) {
  if (m < 1) throw std::invalid_argument("star: need m >= 1");
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= m; ++i) e.emplace_back(0, i);
  return Graph(m + 1, e);
}

/// Q_k on bit strings; antipodal vertices are v and v ^ (2^k - 1).
inline Graph hypercube(int k) {
  if (k < 1 || k > 5) throw std::invalid_argument("hypercube: need 1 <= k <= 5");
  const int n = 1 << k;
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < n; ++v)
    for (int b = 0; b < k; ++b)
      if (v < (v ^ (1 << b))) e.emplace_back(v, v ^ (1 << b));
  return Graph(n, e);
}

/// Identifies the last vertex of a with vertex 0 of b.
inline Graph one_sum(const Graph& a, const Graph& b) {
  const int na = a.order(), n = na + b.order() - 1;
  if (a.order() < 1 || b.order() < 1) throw std::invalid_argument("one_sum: empty block");
  auto e = a.edges();
  for (auto [u, v] : b.edges()) e.emplace_back(u + na - 1, v + na - 1);
  return Graph(n, e);
}

/// Chain of 1-sums; each entry is a cycle length, with 2 meaning a single edge.
inline Graph one_sum_chain(const std::vector<int>& blocks) {
  if (blocks.empty()) throw std::invalid_argument("one_sum_chain: no blocks");
  auto block = [](int len) { return len == 2 ? path(2) : cycle(len); };
  Graph g = block(blocks[0]);
  for (std::size_t i = 1; i < blocks.size(); ++i) g = one_sum(g, block(blocks[i]));
  return g;
}

}  // namespace family

/// Builds a family member from "name:p1,p2,...", e.g. "cycle:4", "hypercube:3",
/// "one_sum:3,3".
inline Graph construct(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string name(spec.substr(0, colon));
  std::vector<int> params;
  if (colon != std::string_view::npos) {
    std::string rest(spec.substr(colon + 1));
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const auto comma = rest.find(',', pos);
      const std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      std::size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(tok, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("construct: bad parameter '" + tok + "'");
      }
      if (used != tok.size()) throw std::invalid_argument("construct: bad parameter '" + tok + "'");
      params.push_back(value);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  auto one = [&]() {
    if (params.size() != 1) throw std::invalid_argument("construct: " + name + " takes one parameter");
    return params[0];
  };
  if (name == "path") return family::path(one());
  if (name == "cycle") return family::cycle(one());
  if (name == "complete") return family::complete(one());
  if (name == "complete_minus_edge") return family::complete_minus_edge(one());
  if (name == "star") return family::star(one());
  if (name == "hypercube") return family::hypercube(one());
  if (name == "one_sum") {
    for (int len : params)
      if (len != 2 && len < 3) throw std::invalid_argument("construct: one_sum blocks are cycles (>= 3) or 2 for an edge");
    return family::one_sum_chain(params);
  }
  throw std::invalid_argument("construct: unknown family '" + name + "'");
}

}  // namespace pstlab
