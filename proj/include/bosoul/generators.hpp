#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "bosoul/graph.hpp"
#include "bosoul/rng.hpp"

namespace bosoul {

namespace detail {

// One Watts-Strogatz draw: ring lattice with k/2 neighbors per side, then
// each lattice edge (u, u+j) is rewired to (u, w) with probability p, w
// uniform among nodes that are neither u nor already adjacent to u.
inline Graph watts_strogatz_once(std::size_t n, std::size_t k, double p, Rng& rng) {
  std::vector<std::set<NodeId>> adj(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t j = 1; j <= k / 2; ++j) {
      const auto v = static_cast<NodeId>((u + j) % n);
      adj[u].insert(v);
      adj[v].insert(static_cast<NodeId>(u));
    }
  }
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (std::size_t u = 0; u < n; ++u) {
      if (!bernoulli(rng, p)) continue;
      if (adj[u].size() >= n - 1) continue;
      const auto v = static_cast<NodeId>((u + j) % n);
      if (!adj[u].contains(v)) continue;  // already rewired away
      NodeId w;
      do {
        w = static_cast<NodeId>(uniform_index(rng, n));
      } while (w == u || adj[u].contains(w));
      adj[u].erase(v);
      adj[v].erase(static_cast<NodeId>(u));
      adj[u].insert(w);
      adj[w].insert(static_cast<NodeId>(u));
    }
  }
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (NodeId w : adj[u]) {
      if (u < w) edges.push_back({static_cast<NodeId>(u), w});
    }
  }
  return Graph(n, edges);
}

}  // namespace detail

inline constexpr int kMaxConnectivityAttempts = 100;

/// Connected Watts-Strogatz small-world graph. Draws are repeated with
/// derived seeds until the result is connected.
inline Graph generate_small_world(std::size_t n, std::size_t k_neighbors, double rewire_p,
                                  std::uint64_t seed) {
  if (k_neighbors % 2 != 0) throw Error("small-world k_neighbors must be even");
  if (k_neighbors >= n) throw Error("small-world k_neighbors must be below the node count");
  if (!(rewire_p >= 0.0 && rewire_p <= 1.0)) throw Error("rewire probability outside [0,1]");
  for (int attempt = 0; attempt < kMaxConnectivityAttempts; ++attempt) {
    Rng rng(derive_seed(seed, "small_world", static_cast<std::uint64_t>(attempt)));
    Graph g = detail::watts_strogatz_once(n, k_neighbors, rewire_p, rng);
    if (is_connected(g)) return g;
  }
  throw Error("no connected small-world graph after " + std::to_string(kMaxConnectivityAttempts) +
              " attempts");
}

/// G(n, p): every unordered pair is an edge independently with probability p.
inline Graph generate_erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability outside [0,1]");
  Rng rng(derive_seed(seed, "erdos_renyi"));
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (bernoulli(rng, p)) edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    }
  }
  return Graph(n, edges);
}

}  // namespace bosoul
