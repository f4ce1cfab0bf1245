#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "bosoul/graph.hpp"
#include "bosoul/rng.hpp"
#include "bosoul/spectral.hpp"

namespace bosoul {

inline constexpr std::uint64_t kMaxCandidateSets = 10'000'000;

/// Which coordinates candidate sets are clustered in.
enum class SignalSpace {
  Spectral,      // low-frequency graph Fourier coefficients
  RawIndicator,  // the 0/1 indicator restricted to the pool nodes
};

/// Every n-subset of the top-a degree pool, with one signal row per set and
/// (after clustering) a cluster id per set.
struct CandidatePool {
  std::vector<NodeId> pool_nodes;  // ascending id
  std::vector<NodeSet> sets;       // lexicographic by members
  Eigen::MatrixXd signals;         // row i describes sets[i]
  std::vector<std::size_t> assignment;
  std::size_t clusters = 0;
  std::vector<std::vector<std::size_t>> cluster_members;  // ascending set ids

  std::size_t size() const noexcept { return sets.size(); }
};

inline std::uint64_t binomial(std::uint64_t a, std::uint64_t n) {
  if (n > a) return 0;
  n = std::min(n, a - n);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= n; ++i) {
    // r * (a - n + i) / i stays integral at every step.
    if (r > std::numeric_limits<std::uint64_t>::max() / (a - n + i)) return std::numeric_limits<std::uint64_t>::max();
    r = r * (a - n + i) / i;
  }
  return r;
}

struct CandidateOptions {
  /// Drop sets containing two adjacent nodes.
  bool require_non_adjacent = false;
  std::uint64_t limit = kMaxCandidateSets;
};

/// All n-subsets of the `a` highest-degree nodes, lexicographic by member ids.
/// Signals are left empty.
inline CandidatePool enumerate_candidate_sets(const Graph& g, std::size_t a, std::size_t n,
                                              const CandidateOptions& options = {}) {
  if (n < 1) throw Error("source count must be at least 1");
  if (n > a) throw Error("source count exceeds candidate pool size");
  if (a > g.num_nodes()) throw Error("candidate pool larger than the graph");
  const std::uint64_t count = binomial(a, n);
  if (count > options.limit) {
    throw Error("C(" + std::to_string(a) + "," + std::to_string(n) + ") candidate sets exceed the limit of " +
                std::to_string(options.limit) + "; use a smaller pool size");
  }

  CandidatePool pool;
  pool.pool_nodes = top_degree_nodes(g, a);
  std::sort(pool.pool_nodes.begin(), pool.pool_nodes.end());
  pool.sets.reserve(static_cast<std::size_t>(count));

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::vector<NodeId> members(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) members[i] = pool.pool_nodes[idx[i]];
    bool keep = true;
    if (options.require_non_adjacent) {
      for (std::size_t i = 0; i < n && keep; ++i) {
        for (std::size_t j = i + 1; j < n && keep; ++j) keep = !g.has_edge(members[i], members[j]);
      }
    }
    if (keep) pool.sets.emplace_back(g.num_nodes(), members);

    std::size_t i = n;
    while (i > 0 && idx[i - 1] == a - n + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (pool.sets.empty()) throw Error("no candidate set satisfies the non-adjacency constraint");
  return pool;
}

/// Fills pool.signals with the first `truncate_to` Fourier coefficients of
/// each set.
inline void attach_spectral_signals(CandidatePool& pool, const SpectralBasis& basis, std::size_t truncate_to) {
  truncate_to = std::min(truncate_to, basis.size());
  const auto m = static_cast<Eigen::Index>(truncate_to);
  // Gather the needed columns of Uᵀ once.
  Eigen::MatrixXd columns(m, static_cast<Eigen::Index>(pool.pool_nodes.size()));
  for (std::size_t p = 0; p < pool.pool_nodes.size(); ++p) {
    columns.col(static_cast<Eigen::Index>(p)) = basis.fourier_operator().col(pool.pool_nodes[p]).head(m);
  }
  pool.signals.setZero(static_cast<Eigen::Index>(pool.sets.size()), m);
  for (std::size_t i = 0; i < pool.sets.size(); ++i) {
    for (NodeId v : pool.sets[i].members()) {
      const auto p = std::lower_bound(pool.pool_nodes.begin(), pool.pool_nodes.end(), v) - pool.pool_nodes.begin();
      pool.signals.row(static_cast<Eigen::Index>(i)) += columns.col(p).transpose();
    }
  }
}

/// Fills pool.signals with the indicator restricted to pool nodes. Every
/// other coordinate is zero for all candidates, so distances are unchanged.
inline void attach_indicator_signals(CandidatePool& pool) {
  pool.signals.setZero(static_cast<Eigen::Index>(pool.sets.size()), static_cast<Eigen::Index>(pool.pool_nodes.size()));
  for (std::size_t i = 0; i < pool.sets.size(); ++i) {
    for (NodeId v : pool.sets[i].members()) {
      const auto p = std::lower_bound(pool.pool_nodes.begin(), pool.pool_nodes.end(), v) - pool.pool_nodes.begin();
      pool.signals(static_cast<Eigen::Index>(i), p) = 1.0;
    }
  }
}

inline CandidatePool enumerate_candidates(const Graph& g, const SpectralBasis& basis, std::size_t a, std::size_t n,
                                          std::size_t truncate_to, const CandidateOptions& options = {}) {
  CandidatePool pool = enumerate_candidate_sets(g, a, n, options);
  attach_spectral_signals(pool, basis, truncate_to);
  return pool;
}

struct KMeansResult {
  std::vector<std::size_t> assignment;
  Eigen::MatrixXd centroids;
  double inertia = 0.0;
  std::size_t iterations = 0;
};

inline double kmeans_inertia(const Eigen::MatrixXd& points, const std::vector<std::size_t>& assignment,
                             std::size_t k) {
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), points.cols());
  std::vector<std::size_t> counts(k, 0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    centroids.row(static_cast<Eigen::Index>(assignment[i])) += points.row(i);
    ++counts[assignment[i]];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c]) centroids.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
  }
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    inertia += (points.row(i) - centroids.row(static_cast<Eigen::Index>(assignment[i]))).squaredNorm();
  }
  return inertia;
}

/// Lloyd's k-means with k-means++ seeding. Stops after `max_iterations` or
/// when inertia changes by less than `tolerance` relative. Empty clusters
/// take the point farthest from its centroid. Ties in nearest-centroid go to
/// the lower cluster id.
inline KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                           std::size_t max_iterations = 300, double tolerance = 1e-4) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k < 1 || k > n) throw Error("cluster count must be in 1..number of points");
  const auto K = static_cast<Eigen::Index>(k);
  Rng rng(derive_seed(seed, "kmeans++"));

  KMeansResult out;
  out.centroids.resize(K, points.cols());
  const Eigen::VectorXd norms = points.rowwise().squaredNorm();

  // k-means++: first centre uniform, then proportional to D².
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::vector<char> chosen(n, 0);
  std::size_t pick = static_cast<std::size_t>(uniform_index(rng, n));
  for (Eigen::Index c = 0; c < K; ++c) {
    out.centroids.row(c) = points.row(static_cast<Eigen::Index>(pick));
    chosen[pick] = 1;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (points.row(static_cast<Eigen::Index>(i)) - out.centroids.row(c)).squaredNorm());
      total += d2[i];
    }
    if (c + 1 == K) break;
    if (total > 0.0) {
      double r = uniform01(rng) * total;
      pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        r -= d2[i];
        pick = i;
        if (r < 0.0) break;
      }
    } else {
      // All points coincide with a centre; take the lowest unchosen index.
      pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), 0) - chosen.begin());
    }
  }

  out.assignment.assign(n, 0);
  std::vector<double> dist(n, 0.0);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    out.iterations = iter + 1;
    // ‖p − c‖² = ‖p‖² − 2 p·c + ‖c‖²
    const Eigen::MatrixXd cross = points * out.centroids.transpose();
    const Eigen::VectorXd cnorms = out.centroids.rowwise().squaredNorm();
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      Eigen::Index best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Eigen::Index c = 0; c < K; ++c) {
        const double d = norms(ii) - 2.0 * cross(ii, c) + cnorms(c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      out.assignment[i] = static_cast<std::size_t>(best);
      dist[i] = std::max(0.0, best_d);
      inertia += dist[i];
    }

    std::vector<std::size_t> counts(k, 0);
    for (std::size_t a : out.assignment) ++counts[a];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      // Move the worst-fitting point (in a cluster that can spare it).
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[out.assignment[i]] > 1 && (far == n || dist[i] > dist[far])) far = i;
      }
      --counts[out.assignment[far]];
      out.assignment[far] = c;
      counts[c] = 1;
      dist[far] = 0.0;
    }

    out.centroids.setZero();
    for (std::size_t i = 0; i < n; ++i) {
      out.centroids.row(static_cast<Eigen::Index>(out.assignment[i])) += points.row(static_cast<Eigen::Index>(i));
    }
    for (std::size_t c = 0; c < k; ++c) out.centroids.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);

    const bool converged =
        std::isfinite(previous) && std::abs(previous - inertia) <= tolerance * std::max(previous, 1e-300);
    previous = inertia;
    if (converged) break;
  }
  out.inertia = kmeans_inertia(points, out.assignment, k);
  return out;
}

/// Clusters the pool's signal rows into `b` groups.
inline CandidatePool cluster_candidates(CandidatePool pool, std::size_t b, std::uint64_t seed) {
  if (pool.signals.rows() != static_cast<Eigen::Index>(pool.sets.size())) {
    throw Error("candidate signals have not been computed");
  }
  if (b < 1 || b > pool.sets.size()) throw Error("cluster count must be in 1..number of candidates");
  KMeansResult km = kmeans(pool.signals, b, seed);
  pool.assignment = std::move(km.assignment);
  pool.clusters = b;
  pool.cluster_members.assign(b, {});
  for (std::size_t i = 0; i < pool.assignment.size(); ++i) pool.cluster_members[pool.assignment[i]].push_back(i);
  return pool;
}

namespace detail {

// Draws min(count, |ids|) ids uniformly without replacement, in draw order.
inline void draw_without_replacement(std::vector<std::size_t>& ids, std::size_t count, Rng& rng,
                                     std::vector<std::size_t>& out) {
  count = std::min(count, ids.size());
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t r = j + static_cast<std::size_t>(uniform_index(rng, ids.size() - j));
    std::swap(ids[j], ids[r]);
    out.push_back(ids[j]);
  }
}

}  // namespace detail

/// Graph stratified sampling: up to `per_cluster` set ids drawn uniformly
/// without replacement from each cluster, skipping `exclude`. Output is
/// grouped by cluster 0..b-1 in draw order.
inline std::vector<std::size_t> gss_sample(const CandidatePool& pool, std::size_t per_cluster, Rng& rng,
                                           std::span<const std::size_t> exclude = {}) {
  if (per_cluster < 1) throw Error("per-cluster sample size must be at least 1");
  if (pool.clusters == 0) throw Error("candidate pool has not been clustered");
  const std::unordered_set<std::size_t> skip(exclude.begin(), exclude.end());
  std::vector<std::size_t> out;
  std::vector<std::size_t> available;
  for (const auto& members : pool.cluster_members) {
    available.clear();
    for (std::size_t id : members) {
      if (!skip.contains(id)) available.push_back(id);
    }
    detail::draw_without_replacement(available, per_cluster, rng, out);
  }
  if (out.empty()) throw Error("every candidate set is excluded");
  return out;
}

/// Simple random sampling of `count` ids from the whole pool, skipping
/// `exclude`. The ablation counterpart of gss_sample.
inline std::vector<std::size_t> random_sample(const CandidatePool& pool, std::size_t count, Rng& rng,
                                              std::span<const std::size_t> exclude = {}) {
  const std::unordered_set<std::size_t> skip(exclude.begin(), exclude.end());
  std::vector<std::size_t> available;
  available.reserve(pool.size());
  for (std::size_t id = 0; id < pool.size(); ++id) {
    if (!skip.contains(id)) available.push_back(id);
  }
  std::vector<std::size_t> out;
  detail::draw_without_replacement(available, count, rng, out);
  if (out.empty()) throw Error("every candidate set is excluded");
  return out;
}

}  // namespace bosoul
