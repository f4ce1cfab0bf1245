#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bosoul/error.hpp"

namespace bosoul {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u;
  NodeId v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Binary node-state vector, one byte per node (0 or 1).
using Indicator = std::vector<std::uint8_t>;

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Immutable undirected simple graph over nodes 0..n-1, stored as CSR.
///
/// Edges are normalized to u < v and kept sorted; neighbor lists are sorted
/// ascending. Construction rejects self-loops, duplicates and out-of-range
/// endpoints; loaders that want to tolerate those filter them first.
class Graph {
 public:
  Graph() = default;

  Graph(std::size_t n_nodes, std::span<const Edge> edges) : n_nodes_(n_nodes) {
    if (n_nodes > std::numeric_limits<NodeId>::max()) throw Error("graph too large");
    edges_.reserve(edges.size());
    for (const Edge& e : edges) {
      if (e.u >= n_nodes || e.v >= n_nodes) {
        throw Error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                    ") out of range for " + std::to_string(n_nodes) + " nodes");
      }
      if (e.u == e.v) throw Error("self-loop on node " + std::to_string(e.u));
      edges_.push_back(e.u < e.v ? e : Edge{e.v, e.u});
    }
    std::sort(edges_.begin(), edges_.end());
    if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
      throw Error("duplicate edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ")");
    }

    offsets_.assign(n_nodes_ + 1, 0);
    for (const Edge& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    targets_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges_) {
      targets_[cursor[e.u]++] = e.v;
      targets_[cursor[e.v]++] = e.u;
    }
    for (std::size_t v = 0; v < n_nodes_; ++v) {
      std::sort(targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    }
  }

  std::size_t num_nodes() const noexcept { return n_nodes_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(n_nodes_);
    for (std::size_t v = 0; v < n_nodes_; ++v) d[v] = degree(static_cast<NodeId>(v));
    return d;
  }

  bool has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  bool contains(NodeId v) const noexcept { return v < n_nodes_; }

  double average_degree() const noexcept {
    return n_nodes_ == 0 ? 0.0 : 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(n_nodes_);
  }

  /// FNV-1a over the node count and the sorted edge list.
  std::uint64_t fingerprint() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t x) {
      for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xff;
        h *= 0x100000001b3ULL;
      }
    };
    mix(n_nodes_);
    for (const Edge& e : edges_) {
      mix(e.u);
      mix(e.v);
    }
    return h;
  }

 private:
  std::size_t n_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
};

/// A subset of the nodes of an N-node graph, kept as sorted distinct members.
class NodeSet {
 public:
  NodeSet() = default;

  NodeSet(std::size_t universe, std::vector<NodeId> members)
      : universe_(universe), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
      throw Error("node set has repeated members");
    }
    if (!members_.empty() && members_.back() >= universe_) {
      throw Error("node " + std::to_string(members_.back()) + " outside universe of size " +
                  std::to_string(universe_));
    }
  }

  static NodeSet from_indicator(std::span<const std::uint8_t> indicator) {
    std::vector<NodeId> m;
    for (std::size_t v = 0; v < indicator.size(); ++v) {
      if (indicator[v] > 1) throw Error("indicator entries must be 0 or 1");
      if (indicator[v]) m.push_back(static_cast<NodeId>(v));
    }
    return NodeSet(indicator.size(), std::move(m));
  }

  std::size_t universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const std::vector<NodeId>& members() const noexcept { return members_; }

  bool contains(NodeId v) const { return std::binary_search(members_.begin(), members_.end(), v); }

  Indicator indicator() const {
    Indicator x(universe_, 0);
    for (NodeId v : members_) x[v] = 1;
    return x;
  }

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<NodeId> members_;
};

/// |A ∩ B| for sorted member lists.
inline std::size_t intersection_size(const NodeSet& a, const NodeSet& b) noexcept {
  std::size_t count = 0;
  auto i = a.members().begin(), j = b.members().begin();
  while (i != a.members().end() && j != b.members().end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

/// Squared Euclidean distance between the indicator vectors of two sets,
/// i.e. the size of their symmetric difference.
inline double squared_indicator_distance(const NodeSet& a, const NodeSet& b) noexcept {
  return static_cast<double>(a.size() + b.size() - 2 * intersection_size(a, b));
}

/// Hop distances from `source`; unreachable nodes hold kUnreachable.
inline std::vector<std::uint32_t> bfs_distances(const Graph& g, NodeId source) {
  if (!g.contains(source)) throw Error("bfs source " + std::to_string(source) + " is not a node");
  std::vector<std::uint32_t> dist(g.num_nodes(), kUnreachable);
  std::vector<NodeId> frontier{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const NodeId u = frontier[head];
    for (NodeId w : g.neighbors(u)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[u] + 1;
        frontier.push_back(w);
      }
    }
  }
  return dist;
}

/// Component label per node; labels are numbered in order of each
/// component's smallest node id.
inline std::vector<std::size_t> connected_components(const Graph& g, std::size_t* count = nullptr) {
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> label(g.num_nodes(), kUnset);
  std::size_t next = 0;
  std::vector<NodeId> stack;
  for (std::size_t s = 0; s < g.num_nodes(); ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next;
    stack.assign(1, static_cast<NodeId>(s));
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(u)) {
        if (label[w] == kUnset) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

inline bool is_connected(const Graph& g) {
  if (g.num_nodes() == 0) return false;
  std::size_t count = 0;
  connected_components(g, &count);
  return count == 1;
}

/// Graph restricted to `nodes` (any order, distinct). Node i of the result is
/// nodes[i] of the input.
inline Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> local(g.num_nodes(), std::numeric_limits<NodeId>::max());
  for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<NodeId>(i);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (NodeId w : g.neighbors(nodes[i])) {
      NodeId j = local[w];
      if (j != std::numeric_limits<NodeId>::max() && i < j) edges.push_back({static_cast<NodeId>(i), j});
    }
  }
  return Graph(nodes.size(), edges);
}

/// A graph together with the id each of its nodes had in the graph it was
/// derived from.
struct RelabeledGraph {
  Graph graph;
  std::vector<NodeId> original_id;
};

/// Largest connected component, ids recompacted in ascending original order.
/// Ties go to the component holding the smallest original id.
inline RelabeledGraph largest_connected_component(const Graph& g) {
  if (g.num_nodes() == 0) throw Error("largest_connected_component of an empty graph");
  std::size_t count = 0;
  const auto label = connected_components(g, &count);
  std::vector<std::size_t> sizes(count, 0);
  for (std::size_t l : label) ++sizes[l];
  // Labels follow smallest contained id, so the first maximum wins ties.
  const std::size_t best =
      static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  RelabeledGraph out;
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    if (label[v] == best) out.original_id.push_back(static_cast<NodeId>(v));
  }
  out.graph = induced_subgraph(g, out.original_id);
  return out;
}

/// The `a` highest-degree nodes, ordered by (degree desc, id asc).
inline std::vector<NodeId> top_degree_nodes(const Graph& g, std::size_t a) {
  if (a > g.num_nodes()) {
    throw Error("requested " + std::to_string(a) + " top-degree nodes from a graph of " +
                std::to_string(g.num_nodes()));
  }
  std::vector<NodeId> order(g.num_nodes());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&g](NodeId x, NodeId y) { return g.degree(x) > g.degree(y); });
  order.resize(a);
  return order;
}

}  // namespace bosoul
