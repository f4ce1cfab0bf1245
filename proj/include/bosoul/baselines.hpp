#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "bosoul/diffusion.hpp"
#include "bosoul/graph.hpp"

namespace bosoul {

// Shared scaffolding for the heuristic localizers: split the infected
// subgraph into components, hand out picks round-robin (largest component
// first), and pad with uninfected nodes when too few nodes are infected.
namespace detail {

struct InfectedComponent {
  std::vector<NodeId> nodes;  // original ids, ascending
  std::size_t picks = 0;
};

inline std::vector<InfectedComponent> infected_components(const Graph& g, const Snapshot& o_star) {
  if (o_star.size() != g.num_nodes()) throw Error("snapshot length does not match graph");
  const auto infected = o_star.infected_nodes();
  if (infected.empty()) throw Error("snapshot has no infected nodes");
  const Graph sub = induced_subgraph(g, infected);
  std::size_t count = 0;
  const auto label = connected_components(sub, &count);
  std::vector<InfectedComponent> comps(count);
  for (std::size_t i = 0; i < infected.size(); ++i) comps[label[i]].nodes.push_back(infected[i]);
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.nodes.size() > b.nodes.size(); });
  return comps;
}

inline void allocate_round_robin(std::vector<InfectedComponent>& comps, std::size_t n) {
  std::size_t left = n;
  bool progress = true;
  while (left > 0 && progress) {
    progress = false;
    for (auto& c : comps) {
      if (left == 0) break;
      if (c.picks < c.nodes.size()) {
        ++c.picks;
        --left;
        progress = true;
      }
    }
  }
}

// Fills `chosen` up to n with the highest-degree uninfected neighbours of the
// infected set, then with the highest-degree remaining nodes.
inline void pad_sources(const Graph& g, const Snapshot& o_star, std::size_t n, std::vector<NodeId>& chosen) {
  if (chosen.size() >= n) return;
  std::vector<char> taken(g.num_nodes(), 0);
  for (NodeId v : chosen) taken[v] = 1;
  std::vector<NodeId> frontier;
  for (NodeId u : o_star.infected_nodes()) {
    for (NodeId w : g.neighbors(u)) {
      if (!o_star.states[w] && !taken[w]) {
        taken[w] = 2;
        frontier.push_back(w);
      }
    }
  }
  auto by_degree = [&g](NodeId a, NodeId b) {
    return g.degree(a) != g.degree(b) ? g.degree(a) > g.degree(b) : a < b;
  };
  std::sort(frontier.begin(), frontier.end(), by_degree);
  for (NodeId v : frontier) {
    if (chosen.size() == n) return;
    chosen.push_back(v);
    taken[v] = 1;
  }
  for (NodeId v : top_degree_nodes(g, g.num_nodes())) {
    if (chosen.size() == n) return;
    if (taken[v] != 1) chosen.push_back(v);
  }
}

template <typename PickFn>
NodeSet localize_by_component(const Graph& g, const Snapshot& o_star, std::size_t n, PickFn&& pick) {
  if (n < 1) throw Error("source count must be at least 1");
  if (n > g.num_nodes()) throw Error("source count exceeds graph size");
  auto comps = infected_components(g, o_star);
  allocate_round_robin(comps, n);
  std::vector<NodeId> chosen;
  for (const auto& c : comps) {
    if (c.picks == 0) continue;
    auto picked = pick(c.nodes, c.picks);
    chosen.insert(chosen.end(), picked.begin(), picked.end());
  }
  pad_sources(g, o_star, n, chosen);
  return NodeSet(g.num_nodes(), std::move(chosen));
}

}  // namespace detail

/// Eccentricity of each node of a connected graph.
inline std::vector<std::uint32_t> eccentricities(const Graph& g) {
  std::vector<std::uint32_t> ecc(g.num_nodes(), 0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const auto dist = bfs_distances(g, v);
    ecc[v] = *std::max_element(dist.begin(), dist.end());
  }
  return ecc;
}

/// Jordan-center localization: within each infected component, the nodes of
/// smallest eccentricity in the infected subgraph (ties by id).
inline NodeSet jordan_localize(const Graph& g, const Snapshot& o_star, std::size_t n) {
  return detail::localize_by_component(g, o_star, n, [&g](const std::vector<NodeId>& nodes, std::size_t picks) {
    const auto ecc = eccentricities(induced_subgraph(g, nodes));
    std::vector<std::size_t> order(nodes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&ecc](std::size_t a, std::size_t b) { return ecc[a] < ecc[b]; });
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < picks; ++i) out.push_back(nodes[order[i]]);
    return out;
  });
}

/// Rows/columns of the full-graph Laplacian D − A restricted to `nodes`.
/// Degrees count all neighbours, so uninfected neighbours act as a
/// zero boundary.
inline Eigen::MatrixXd restricted_laplacian(const Graph& g, const std::vector<NodeId>& nodes) {
  const auto m = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    L(i, i) = static_cast<double>(g.degree(nodes[i]));
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (g.has_edge(nodes[i], nodes[j])) L(i, j) = L(j, i) = -1.0;
    }
  }
  return L;
}

/// Index of the largest-magnitude entry of the eigenvector belonging to the
/// smallest eigenvalue of the restricted Laplacian (ties by index).
inline std::size_t netsleuth_best_index(const Graph& g, const std::vector<NodeId>& nodes) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(restricted_laplacian(g, nodes));
  if (solver.info() != Eigen::Success) throw NumericError("infected-subgraph eigendecomposition failed");
  const Eigen::VectorXd u = solver.eigenvectors().col(0).cwiseAbs();
  std::size_t best = 0;
  for (Eigen::Index i = 1; i < u.size(); ++i) {
    // Relative slack keeps symmetric nodes tied despite rounding.
    if (u(i) > u(static_cast<Eigen::Index>(best)) * (1.0 + 1e-9) + 1e-12) best = static_cast<std::size_t>(i);
  }
  return best;
}

/// NetSleuth with a fixed source count: repeatedly take the node with the
/// largest entry of the principal (smallest-eigenvalue) eigenvector of the
/// infected-subgraph Laplacian and remove it from the infected set.
inline NodeSet netsleuth_localize(const Graph& g, const Snapshot& o_star, std::size_t n) {
  return detail::localize_by_component(g, o_star, n, [&g](std::vector<NodeId> nodes, std::size_t picks) {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < picks; ++i) {
      const std::size_t best = netsleuth_best_index(g, nodes);
      out.push_back(nodes[best]);
      nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return out;
  });
}

}  // namespace bosoul
