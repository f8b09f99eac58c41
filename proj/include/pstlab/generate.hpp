#pragma once

// Canonical labelling, isomorph-free enumeration of free trees and connected
// graphs, and graph6 corpus ingestion.

#include "pstlab/graph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace pstlab {

inline constexpr int kMaxCanonicalOrder = 16;

namespace detail {

/// Partition refinement with a backtracking search over individualisations,
/// pruned by automorphisms discovered at equal leaves.
class CanonicalSearch {
 public:
  explicit CanonicalSearch(const Graph& g) : n_(g.order()) {
    for (int v = 0; v < n_; ++v) adj_[v] = static_cast<std::uint32_t>(g.neighbours(v));
  }

  /// lab[i] is the vertex placed at canonical position i.
  std::vector<int> run() {
    if (n_ == 0) return {};
    Partition root{n_ == 32 ? ~0u : (1u << n_) - 1};
    std::vector<std::uint32_t> queue{root[0]};
    refine(root, queue);
    std::vector<int> fixed;
    search(root, fixed);
    return best_lab_;
  }

 private:
  using Partition = std::vector<std::uint32_t>;  // ordered cells as vertex masks
  using Cert = std::array<std::uint32_t, kMaxCanonicalOrder>;

  void refine(Partition& p, std::vector<std::uint32_t>& queue) const {
    std::size_t head = 0;
    while (head < queue.size() && p.size() < static_cast<std::size_t>(n_)) {
      const std::uint32_t w = queue[head++];
      for (std::size_t x = 0; x < p.size(); ++x) {
        const std::uint32_t cell = p[x];
        if (std::popcount(cell) == 1) continue;
        std::array<std::uint32_t, kMaxCanonicalOrder + 1> by{};
        int groups = 0;
        for (std::uint32_t m = cell; m; m &= m - 1) {
          const int v = std::countr_zero(m);
          auto& slot = by[std::popcount(adj_[v] & w)];
          if (!slot) ++groups;
          slot |= 1u << v;
        }
        if (groups == 1) continue;
        std::vector<std::uint32_t> parts;
        for (std::uint32_t s : by)
          if (s) parts.push_back(s);
        p.erase(p.begin() + static_cast<std::ptrdiff_t>(x));
        p.insert(p.begin() + static_cast<std::ptrdiff_t>(x), parts.begin(), parts.end());
        queue.insert(queue.end(), parts.begin(), parts.end());
        x += parts.size() - 1;
      }
    }
  }

  void search(const Partition& p, std::vector<int>& fixed) {
    if (p.size() == static_cast<std::size_t>(n_)) {
      leaf(p);
      return;
    }
    std::size_t target = 0;
    while (std::popcount(p[target]) == 1) ++target;
    std::vector<int> explored;
    for (std::uint32_t m = p[target]; m; m &= m - 1) {
      const int v = std::countr_zero(m);
      if (!explored.empty() && equivalent_to_explored(v, explored, fixed)) continue;
      Partition child = p;
      const std::uint32_t single = 1u << v;
      child[target] &= ~single;
      child.insert(child.begin() + static_cast<std::ptrdiff_t>(target), single);
      std::vector<std::uint32_t> queue{single};
      refine(child, queue);
      fixed.push_back(v);
      search(child, fixed);
      fixed.pop_back();
      explored.push_back(v);
    }
  }

  bool equivalent_to_explored(int v, const std::vector<int>& explored, const std::vector<int>& fixed) const {
    std::array<int, kMaxCanonicalOrder> parent;
    std::iota(parent.begin(), parent.begin() + n_, 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool any = false;
    for (const auto& gen : generators_) {
      if (!std::all_of(fixed.begin(), fixed.end(), [&](int f) { return gen[f] == f; })) continue;
      any = true;
      for (int x = 0; x < n_; ++x) parent[find(x)] = find(gen[x]);
    }
    if (!any) return false;
    return std::any_of(explored.begin(), explored.end(), [&](int w) { return find(w) == find(v); });
  }

  void leaf(const Partition& p) {
    std::vector<int> lab(n_);
    for (int i = 0; i < n_; ++i) lab[i] = std::countr_zero(p[i]);
    Cert cert{};
    for (int i = 0; i < n_; ++i) {
      std::uint32_t row = 0;
      for (int j = 0; j < n_; ++j)
        if (adj_[lab[i]] >> lab[j] & 1) row |= 1u << (n_ - 1 - j);
      cert[i] = row;
    }
    if (best_lab_.empty() || cert > best_) {
      best_ = cert;
      best_lab_ = std::move(lab);
    } else if (cert == best_) {
      std::vector<int> gen(n_);
      bool identity = true;
      for (int i = 0; i < n_; ++i) {
        gen[best_lab_[i]] = lab[i];
        identity = identity && best_lab_[i] == lab[i];
      }
      if (!identity) generators_.push_back(std::move(gen));
    }
  }

  int n_;
  std::array<std::uint32_t, kMaxCanonicalOrder> adj_{};
  Cert best_{};
  std::vector<int> best_lab_;
  std::vector<std::vector<int>> generators_;
};

}  // namespace detail

/// A relabelling that is identical for isomorphic inputs (n <= 16).
inline Graph canonical_graph(const Graph& g) {
  if (g.order() > kMaxCanonicalOrder)
    throw std::invalid_argument("canonical_form: graphs above 16 vertices are not supported");
  const std::vector<int> lab = detail::CanonicalSearch(g).run();
  std::vector<int> perm(g.order());
  for (int i = 0; i < g.order(); ++i) perm[lab[i]] = i;
  return g.relabelled(perm);
}

/// Canonical graph6 word: equal exactly for isomorphic graphs.
inline std::string canonical_form(const Graph& g) { return write_graph6(canonical_graph(g)); }

// ---------------------------------------------------------------------------

/// Single-consumer sequence of graphs with a production counter.
class GraphStream {
 public:
  using Producer = std::function<std::optional<Graph>()>;

  GraphStream(std::string source, Producer producer) : source_(std::move(source)), producer_(std::move(producer)) {}

  std::optional<Graph> next() {
    auto g = producer_();
    if (g) ++produced_;
    return g;
  }

  std::vector<Graph> collect() {
    std::vector<Graph> out;
    while (auto g = next()) out.push_back(std::move(*g));
    return out;
  }

  const std::string& source() const { return source_; }
  std::size_t produced() const { return produced_; }

 private:
  std::string source_;
  Producer producer_;
  std::size_t produced_ = 0;
};

namespace detail {

/// Free trees as canonical level sequences, following the Wright-Richmond-
/// Odlyzko-McKay successor rule.
class FreeTreeIterator {
 public:
  explicit FreeTreeIterator(int n) : n_(n) {
    if (n == 1) {
      single_ = true;
      return;
    }
    for (int i = 0; i <= n / 2; ++i) layout_.push_back(i);
    for (int i = 1; i < (n + 1) / 2; ++i) layout_.push_back(i);
    has_ = true;
  }

  std::optional<Graph> next() {
    if (single_) {
      single_ = false;
      return Graph(1);
    }
    if (!has_) return std::nullopt;
    if (!next_valid()) {
      has_ = false;
      return std::nullopt;
    }
    Graph g = to_graph(layout_);
    has_ = next_rooted(layout_, -1);
    return g;
  }

 private:
  using Layout = std::vector<int>;

  static bool next_rooted(Layout& seq, int p) {
    if (p < 0) {
      p = static_cast<int>(seq.size()) - 1;
      while (seq[p] == 1) --p;
    }
    if (p == 0) return false;
    int q = p - 1;
    while (seq[q] != seq[p] - 1) --q;
    for (std::size_t i = p; i < seq.size(); ++i) seq[i] = seq[i - p + q];
    return true;
  }

  static void split(const Layout& seq, Layout& left, Layout& rest) {
    std::size_t m = seq.size();
    bool one = false;
    for (std::size_t i = 0; i < seq.size(); ++i)
      if (seq[i] == 1) {
        if (one) {
          m = i;
          break;
        }
        one = true;
      }
    left.clear();
    rest.assign(1, 0);
    for (std::size_t i = 1; i < m; ++i) left.push_back(seq[i] - 1);
    for (std::size_t i = m; i < seq.size(); ++i) rest.push_back(seq[i]);
  }

  // Advances layout_ to the next sequence that encodes a free tree rooted at
  // its centre; false when exhausted.
  bool next_valid() {
    for (;;) {
      Layout left, rest;
      split(layout_, left, rest);
      const int lh = *std::max_element(left.begin(), left.end());
      const int rh = *std::max_element(rest.begin(), rest.end());
      bool valid = rh >= lh;
      if (valid && rh == lh) {
        if (left.size() > rest.size() || (left.size() == rest.size() && left > rest)) valid = false;
      }
      if (valid) return true;
      const int p = static_cast<int>(left.size());
      const int old = layout_[p];
      if (!next_rooted(layout_, p)) return false;
      if (old > 2) {
        split(layout_, left, rest);
        const int h = *std::max_element(left.begin(), left.end());
        for (int i = 0; i < h + 1; ++i) layout_[layout_.size() - 1 - i] = h + 1 - i;
      }
    }
  }

  static Graph to_graph(const Layout& seq) {
    std::vector<std::pair<int, int>> edges;
    std::vector<int> last_at(seq.size() + 1, -1);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (seq[i] > 0) edges.emplace_back(last_at[seq[i] - 1], static_cast<int>(i));
      last_at[seq[i]] = static_cast<int>(i);
    }
    return Graph(static_cast<int>(seq.size()), edges);
  }

  int n_;
  bool single_ = false;
  bool has_ = false;
  Layout layout_;
};

}  // namespace detail

inline constexpr int kMaxTreeOrder = 16;
inline constexpr int kMaxGeneratedGraphOrder = 8;

/// One tree per isomorphism class, deterministic order.
inline GraphStream gen_free_trees(int n) {
  if (n < 1 || n > kMaxTreeOrder) throw std::invalid_argument("gen_free_trees: n must be in 1..16");
  auto it = std::make_shared<detail::FreeTreeIterator>(n);
  return GraphStream("trees:" + std::to_string(n), [it] { return it->next(); });
}

/// All graphs (connected or not) on n vertices up to isomorphism, as sorted
/// canonical graph6 words, by one-vertex augmentation with canonical dedup.
inline std::vector<std::string> all_graphs_canonical(int n) {
  if (n < 1 || n > kMaxGeneratedGraphOrder) throw std::invalid_argument("all_graphs_canonical: n must be in 1..8");
  std::vector<std::string> level{write_graph6(Graph(1))};
  for (int k = 1; k < n; ++k) {
    std::set<std::string> next;
    for (const auto& word : level) {
      const Graph parent = parse_graph6(word);
      std::vector<VertexSet> adj(k + 1, 0);
      for (int v = 0; v < k; ++v) adj[v] = parent.neighbours(v);
      for (VertexSet subset = 0; subset < (VertexSet{1} << k); ++subset) {
        std::vector<VertexSet> a = adj;
        a[k] = subset;
        for (int v = 0; v < k; ++v)
          if (subset >> v & 1) a[v] |= VertexSet{1} << k;
        next.insert(canonical_form(Graph::from_neighbourhoods(std::move(a))));
      }
    }
    level.assign(next.begin(), next.end());
  }
  return level;
}

/// One connected graph per isomorphism class, in canonical graph6 order.
inline GraphStream gen_connected_graphs(int n) {
  if (n < 1 || n > kMaxGeneratedGraphOrder) throw std::invalid_argument("gen_connected_graphs: n must be in 1..8");
  auto graphs = std::make_shared<std::vector<Graph>>();
  for (const auto& word : all_graphs_canonical(n)) {
    Graph g = parse_graph6(word);
    if (is_connected(g)) graphs->push_back(std::move(g));
  }
  auto pos = std::make_shared<std::size_t>(0);
  return GraphStream("graphs:" + std::to_string(n), [graphs, pos]() -> std::optional<Graph> {
    if (*pos >= graphs->size()) return std::nullopt;
    return (*graphs)[(*pos)++];
  });
}

/// The streams one after another.
inline GraphStream concat_streams(std::vector<GraphStream> parts) {
  std::string source;
  for (const auto& p : parts) source += (source.empty() ? "" : "+") + p.source();
  auto shared = std::make_shared<std::vector<GraphStream>>(std::move(parts));
  auto pos = std::make_shared<std::size_t>(0);
  return GraphStream(source, [shared, pos]() -> std::optional<Graph> {
    for (; *pos < shared->size(); ++*pos)
      if (auto g = (*shared)[*pos].next()) return g;
    return std::nullopt;
  });
}

/// Connected graphs on 1..max_n vertices.
inline GraphStream gen_connected_graphs_upto(int max_n) {
  std::vector<GraphStream> parts;
  for (int n = 1; n <= max_n; ++n) parts.push_back(gen_connected_graphs(n));
  return concat_streams(std::move(parts));
}

class CorpusError : public std::runtime_error {
 public:
  CorpusError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// graph6 lines in file order; blank lines are skipped.
inline GraphStream stream_from_file(const std::string& path) {
  auto in = std::make_shared<std::ifstream>(path);
  if (!*in) throw std::runtime_error("cannot open " + path);
  auto line_no = std::make_shared<std::size_t>(0);
  return GraphStream("file:" + path, [in, line_no]() -> std::optional<Graph> {
    std::string line;
    while (std::getline(*in, line)) {
      ++*line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line == kGraph6Header) continue;
      try {
        return parse_graph6(line);
      } catch (const Graph6Error& e) {
        throw CorpusError(e.what(), *line_no);
      }
    }
    if (in->bad()) throw CorpusError("read error", *line_no);
    return std::nullopt;
  });
}

}  // namespace pstlab
