#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bosoul/diffusion.hpp"
#include "bosoul/graph.hpp"
#include "bosoul/rng.hpp"
#include "bosoul/sampler.hpp"
#include "bosoul/spectral.hpp"
#include "bosoul/surrogate.hpp"

namespace bosoul {

enum class SamplingMode { Stratified, Random };

struct BosoulConfig {
  std::size_t pool_size = 50;           // a
  std::size_t sources = 3;              // n
  std::size_t clusters = 20;            // b
  std::size_t samples_per_cluster = 5;  // γ
  std::size_t budget = 70;              // k, total τ evaluations
  std::size_t rounds = 100;             // simulation rounds per evaluation
  std::size_t truncate_to = 128;        // Fourier coefficients used for clustering
  DiffusionConfig diffusion;
  std::uint64_t seed = 0;

  SamplingMode sampling = SamplingMode::Stratified;
  SignalSpace cluster_space = SignalSpace::Spectral;
  LaplacianKind laplacian = LaplacianKind::Combinatorial;
  bool require_non_adjacent = false;
  double noise = 1e-4;
  /// Add each evaluation's Monte-Carlo variance of the mean (var / rounds)
  /// to its GP noise.
  bool noise_from_variance = false;
  unsigned workers = 1;

  void validate() const {
    if (pool_size < 1 || sources < 1 || clusters < 1 || samples_per_cluster < 1 || budget < 1 || rounds < 1) {
      throw Error("BOSouL counts must all be at least 1");
    }
    if (sources > pool_size) throw Error("source count exceeds pool size");
    if (budget < clusters) throw Error("budget is smaller than the number of clusters");
    diffusion.validate();
  }
};

struct Evaluation {
  std::size_t set_id = 0;
  NodeSet set;
  double tau = 0.0;
  double variance = 0.0;
};

struct IterationTrace {
  std::size_t iteration = 0;
  std::size_t chosen_id = 0;
  double ei = 0.0;
  double tau = 0.0;
};

struct LocalizationResult {
  NodeSet sources;
  std::size_t set_id = 0;
  double posterior_mean = 0.0;
  std::vector<Evaluation> evaluations;  // Φ, in evaluation order
  std::vector<IterationTrace> trace;    // acquisition iterations only
  double seconds = 0.0;
};

/// Seed of the τ estimate for candidate `set_id`. Depends only on the master
/// seed and the set, so a set gets the same τ regardless of when it is
/// evaluated.
inline std::uint64_t evaluation_seed(std::uint64_t seed, std::size_t set_id) {
  return derive_seed(seed, "tau", set_id);
}

/// Builds the candidate pool with signals in the configured space and
/// clusters it. `basis` is needed only for the spectral space.
inline CandidatePool prepare_candidates(const Graph& g, const BosoulConfig& cfg, const SpectralBasis* basis) {
  CandidateOptions options;
  options.require_non_adjacent = cfg.require_non_adjacent;
  CandidatePool pool = enumerate_candidate_sets(g, cfg.pool_size, cfg.sources, options);
  if (cfg.cluster_space == SignalSpace::Spectral) {
    if (basis == nullptr) throw Error("spectral clustering needs a spectral basis");
    attach_spectral_signals(pool, *basis, cfg.truncate_to);
  } else {
    attach_indicator_signals(pool);
  }
  if (cfg.clusters > pool.size()) throw Error("more clusters than candidate sets");
  return cluster_candidates(std::move(pool), cfg.clusters, derive_seed(cfg.seed, "cluster"));
}

/// Bayesian-optimization source localization over a prepared pool.
///
/// Initial design: one draw per cluster (b evaluations). Then k − b rounds
/// of: draw γ sets per cluster among unevaluated ones, evaluate the EI
/// maximizer, refit. The answer maximizes the posterior mean over every
/// candidate (ties by lowest set id). Exactly k τ estimates are made.
inline LocalizationResult bosoul_localize(const Graph& g, const Snapshot& o_star, const BosoulConfig& cfg,
                                          const CandidatePool& pool) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  if (o_star.size() != g.num_nodes()) throw Error("snapshot length does not match graph");
  if (o_star.infected_count() == 0) throw Error("snapshot has no infected nodes");
  if (cfg.budget > pool.size()) throw Error("budget exceeds the number of candidate sets");

  LocalizationResult result;
  std::vector<std::size_t> evaluated;
  std::vector<NodeSet> inputs;
  std::vector<double> targets;
  std::vector<double> point_noise;

  auto evaluate = [&](std::size_t id) {
    const TauEstimate est = estimate_tau(g, pool.sets[id], o_star, cfg.diffusion, cfg.rounds,
                                         evaluation_seed(cfg.seed, id), cfg.workers);
    evaluated.push_back(id);
    inputs.push_back(pool.sets[id]);
    targets.push_back(est.mean);
    point_noise.push_back(est.variance / static_cast<double>(cfg.rounds));
    result.evaluations.push_back({id, pool.sets[id], est.mean, est.variance});
    return est.mean;
  };

  auto fit = [&] {
    SurrogateOptions options;
    options.noise = cfg.noise;
    if (cfg.noise_from_variance) options.point_noise = point_noise;
    return SurrogateModel::fit(inputs, targets, options);
  };

  Rng rng(derive_seed(cfg.seed, "sample"));
  auto draw = [&](std::size_t per_cluster) {
    if (cfg.sampling == SamplingMode::Stratified) return gss_sample(pool, per_cluster, rng, evaluated);
    return random_sample(pool, per_cluster * pool.clusters, rng, evaluated);
  };

  // A GP needs two distinct points; with b = 1 the initial design repeats.
  do {
    for (std::size_t id : draw(1)) {
      if (evaluated.size() < cfg.budget) evaluate(id);
    }
  } while (evaluated.size() < std::min<std::size_t>(2, cfg.budget));

  if (evaluated.size() < 2) {
    const std::size_t id = evaluated.front();
    result.set_id = id;
    result.sources = pool.sets[id];
    result.posterior_mean = targets.front();
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }

  SurrogateModel model = fit();
  std::vector<NodeSet> batch;
  for (std::size_t iteration = 0; evaluated.size() < cfg.budget; ++iteration) {
    const auto ids = draw(cfg.samples_per_cluster);
    batch.clear();
    for (std::size_t id : ids) batch.push_back(pool.sets[id]);
    const double best = *std::max_element(targets.begin(), targets.end());
    const AcquisitionResult acq = argmax_ei(model, batch, best);
    const std::size_t chosen = ids[acq.index];
    const double tau = evaluate(chosen);
    result.trace.push_back({iteration, chosen, acq.ei, tau});
    model = fit();
  }

  std::size_t best_id = 0;
  double best_mean = -std::numeric_limits<double>::infinity();
  for (std::size_t id = 0; id < pool.size(); ++id) {
    const double m = model.posterior_mean(pool.sets[id]);
    if (m > best_mean) {
      best_mean = m;
      best_id = id;
    }
  }
  result.set_id = best_id;
  result.sources = pool.sets[best_id];
  result.posterior_mean = best_mean;
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

/// End to end: basis (when clustering spectrally), candidate pool,
/// clustering, then the optimization loop.
inline LocalizationResult bosoul_localize(const Graph& g, const Snapshot& o_star, const BosoulConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  std::optional<SpectralBasis> basis;
  if (cfg.cluster_space == SignalSpace::Spectral) basis = build_basis(g, cfg.laplacian);
  const CandidatePool pool = prepare_candidates(g, cfg, basis ? &*basis : nullptr);
  LocalizationResult result = bosoul_localize(g, o_star, cfg, pool);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace bosoul
