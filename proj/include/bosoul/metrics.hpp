#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "bosoul/graph.hpp"

namespace bosoul {

struct DistanceReport {
  std::uint64_t total = 0;
  std::vector<std::pair<NodeId, NodeId>> matching;  // (predicted, true)
};

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian
/// method with potentials, O(k³)). Returns row -> column.
inline std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<std::int64_t>>& cost) {
  const std::size_t k = cost.size();
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // 1-based arrays; column 0 is a virtual start.
  std::vector<std::int64_t> u(k + 1, 0), v(k + 1, 0);
  std::vector<std::size_t> match_col(k + 1, 0), way(k + 1, 0);
  for (std::size_t row = 1; row <= k; ++row) {
    match_col[0] = row;
    std::size_t col0 = 0;
    std::vector<std::int64_t> minv(k + 1, kInf);
    std::vector<char> used(k + 1, 0);
    do {
      used[col0] = 1;
      const std::size_t r = match_col[col0];
      std::int64_t delta = kInf;
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= k; ++c) {
        if (used[c]) continue;
        const std::int64_t cur = cost[r - 1][c - 1] - u[r] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= k; ++c) {
        if (used[c]) {
          u[match_col[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (match_col[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match_col[col0] = match_col[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<std::size_t> row_to_col(k);
  for (std::size_t c = 1; c <= k; ++c) row_to_col[match_col[c] - 1] = c - 1;
  return row_to_col;
}

namespace detail {

inline std::vector<std::vector<std::int64_t>> hop_matrix(const Graph& g, const NodeSet& from, const NodeSet& to) {
  std::vector<std::vector<std::int64_t>> cost(from.size(), std::vector<std::int64_t>(to.size()));
  for (std::size_t i = 0; i < from.size(); ++i) {
    const auto dist = bfs_distances(g, from.members()[i]);
    for (std::size_t j = 0; j < to.size(); ++j) {
      const auto d = dist[to.members()[j]];
      if (d == kUnreachable) throw Error("source distance undefined: nodes are not connected");
      cost[i][j] = d;
    }
  }
  return cost;
}

inline void check_sizes(const NodeSet& predicted, const NodeSet& truth) {
  if (predicted.size() != truth.size()) throw Error("predicted and true source sets differ in size");
}

}  // namespace detail

/// min over permutations π of Σ hop(predicted_i, truth_π(i)), solved exactly
/// as an optimal assignment on the hop-distance matrix.
inline DistanceReport source_distance(const Graph& g, const NodeSet& predicted, const NodeSet& truth) {
  detail::check_sizes(predicted, truth);
  const auto cost = detail::hop_matrix(g, predicted, truth);
  const auto assignment = min_cost_assignment(cost);
  DistanceReport out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    out.total += static_cast<std::uint64_t>(cost[i][assignment[i]]);
    out.matching.emplace_back(predicted.members()[i], truth.members()[assignment[i]]);
  }
  return out;
}

inline constexpr std::size_t kBruteForceMaxSize = 8;

/// Exhaustive minimum over all permutations; sets of at most 8 nodes.
inline std::uint64_t brute_force_distance(const Graph& g, const NodeSet& predicted, const NodeSet& truth) {
  detail::check_sizes(predicted, truth);
  if (predicted.size() > kBruteForceMaxSize) throw Error("brute-force distance limited to 8 sources");
  const auto cost = detail::hop_matrix(g, predicted, truth);
  std::vector<std::size_t> perm(predicted.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  do {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) total += static_cast<std::uint64_t>(cost[i][perm[i]]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace bosoul
