#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bosoul/baselines.hpp"
#include "bosoul/basis_cache.hpp"
#include "bosoul/diffusion.hpp"
#include "bosoul/edge_list.hpp"
#include "bosoul/generators.hpp"
#include "bosoul/harness/config.hpp"
#include "bosoul/harness/io.hpp"
#include "bosoul/localizer.hpp"
#include "bosoul/metrics.hpp"

namespace bosoul {

/// Graph described by `desc`, with labels for writing node ids back out.
struct PreparedGraph {
  Graph graph;
  std::vector<std::string> labels;
};

inline PreparedGraph build_graph(const GraphSpec& desc, std::uint64_t master_seed) {
  const std::uint64_t seed = desc.seed.value_or(derive_seed(master_seed, "graph"));
  PreparedGraph out;
  if (desc.type == "small_world") {
    out.graph = generate_small_world(desc.nodes, desc.k_neighbors, desc.rewire_p, seed);
  } else if (desc.type == "erdos_renyi") {
    out.graph = generate_erdos_renyi(desc.nodes, desc.edge_p, seed);
  } else if (desc.type == "edge_list") {
    if (desc.path.empty()) throw Error("graph.path is required for edge_list graphs");
    EdgeList loaded = load_edge_list(desc.path);
    out.graph = std::move(loaded.graph);
    out.labels = std::move(loaded.labels);
  } else {
    throw Error("unknown graph type '" + desc.type + "'");
  }
  if (out.labels.empty()) {
    for (std::size_t v = 0; v < out.graph.num_nodes(); ++v) out.labels.push_back(std::to_string(v));
  }
  if (desc.largest_component && !is_connected(out.graph)) {
    RelabeledGraph lcc = largest_connected_component(out.graph);
    std::vector<std::string> labels;
    for (NodeId v : lcc.original_id) labels.push_back(out.labels[v]);
    out.graph = std::move(lcc.graph);
    out.labels = std::move(labels);
  }
  return out;
}

struct GroundTruth {
  NodeSet sources;
  Snapshot observation;
};

inline constexpr std::size_t kSourceDrawAttempts = 10'000;
inline constexpr std::size_t kObservationAttempts = 20;

/// Draws n pairwise non-adjacent sources uniformly from the top-`pool_size`
/// degree nodes and simulates `observation_time` steps from them. Redraws
/// when fewer than n nodes end up infected.
inline GroundTruth generate_ground_truth(const Graph& g, std::size_t n, const DiffusionConfig& cfg,
                                         std::size_t observation_time, Rng& rng, std::size_t pool_size) {
  cfg.validate();
  if (n < 1) throw Error("source count must be at least 1");
  pool_size = std::min(pool_size, g.num_nodes());
  if (n > pool_size) throw Error("source count exceeds the candidate pool");
  std::vector<NodeId> pool = top_degree_nodes(g, pool_size);

  for (std::size_t attempt = 0; attempt < kObservationAttempts; ++attempt) {
    std::optional<std::vector<NodeId>> chosen;
    for (std::size_t draw = 0; draw < kSourceDrawAttempts && !chosen; ++draw) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(pool[j], pool[j + static_cast<std::size_t>(uniform_index(rng, pool.size() - j))]);
      }
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        for (std::size_t j = i + 1; j < n && ok; ++j) ok = !g.has_edge(pool[i], pool[j]);
      }
      if (ok) chosen.emplace(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
    }
    if (!chosen) throw Error("no pairwise non-adjacent source set found in the candidate pool");
    GroundTruth truth{NodeSet(g.num_nodes(), std::move(*chosen)), {}};
    truth.observation = simulate(g, truth.sources, cfg, observation_time, rng());
    if (truth.observation.infected_count() >= n) return truth;
  }
  throw Error("observations kept ending with fewer infected nodes than sources");
}

struct RunRecord {
  std::size_t run = 0;
  std::string method;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> distance;
  double seconds = 0.0;
  std::optional<double> tau;
  std::string status = "ok";
};

struct MethodSummary {
  std::string method;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation over successful runs
  std::size_t runs = 0;
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // sorted by (run, method)
  std::vector<MethodSummary> summaries;
};

inline std::vector<MethodSummary> summarize(const std::vector<RunRecord>& records,
                                            const std::vector<std::string>& methods) {
  std::vector<MethodSummary> out;
  for (const auto& m : methods) {
    MethodSummary s{m};
    std::vector<double> values;
    for (const auto& r : records) {
      if (r.method == m && r.distance) values.push_back(static_cast<double>(*r.distance));
    }
    s.runs = values.size();
    if (!values.empty()) {
      for (double v : values) s.mean += v;
      s.mean /= static_cast<double>(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - s.mean) * (v - s.mean);
      s.stddev = std::sqrt(ss / static_cast<double>(values.size()));
    }
    out.push_back(s);
  }
  return out;
}

namespace detail {

inline std::string sanitize_status(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

template <typename Fn>
double timed(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

/// Runs every configured method on `repetitions` independent ground truths
/// over one graph. Repetition r draws its truth and method seeds from
/// derive_seed(master, "repetition", r), so every method sees the same o*.
/// Failures are recorded per run and do not stop the experiment.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const PreparedGraph prepared = build_graph(config.graph, config.seed);
  const Graph& g = prepared.graph;

  BosoulConfig bosoul_cfg = config.bosoul;
  bosoul_cfg.sources = config.sources;
  bosoul_cfg.diffusion = config.diffusion;

  const bool runs_bosoul = std::find(config.methods.begin(), config.methods.end(), "bosoul") != config.methods.end();
  std::optional<SpectralBasis> basis;
  if (runs_bosoul && bosoul_cfg.cluster_space == SignalSpace::Spectral) {
    basis = config.cache_dir.empty() ? build_basis(g, bosoul_cfg.laplacian)
                                     : cached_basis(g, config.cache_dir, bosoul_cfg.laplacian);
  }

  ExperimentResult result;
  for (std::size_t run = 0; run < config.repetitions; ++run) {
    const std::uint64_t rep_seed = derive_seed(config.seed, "repetition", run);
    std::optional<GroundTruth> truth;
    std::string truth_error;
    try {
      Rng rng(derive_seed(rep_seed, "truth"));
      truth = generate_ground_truth(g, config.sources, config.diffusion, config.observation_time, rng,
                                    bosoul_cfg.pool_size);
    } catch (const Error& e) {
      truth_error = e.what();
    }

    for (const auto& method : config.methods) {
      RunRecord rec;
      rec.run = run;
      rec.method = method;
      rec.seed = rep_seed;
      if (!truth) {
        rec.status = detail::sanitize_status("failed: " + truth_error);
        result.records.push_back(rec);
        continue;
      }
      try {
        NodeSet predicted;
        if (method == "bosoul") {
          BosoulConfig cfg = bosoul_cfg;
          cfg.seed = derive_seed(rep_seed, "bosoul");
          LocalizationResult loc;
          rec.seconds = detail::timed([&] {
            const CandidatePool pool = prepare_candidates(g, cfg, basis ? &*basis : nullptr);
            loc = bosoul_localize(g, truth->observation, cfg, pool);
          });
          predicted = loc.sources;
          // τ of the answer; reuse the estimate when the set was evaluated.
          auto hit = std::find_if(loc.evaluations.begin(), loc.evaluations.end(),
                                  [&](const Evaluation& e) { return e.set_id == loc.set_id; });
          rec.tau = hit != loc.evaluations.end()
                        ? hit->tau
                        : estimate_tau(g, predicted, truth->observation, cfg.diffusion, cfg.rounds,
                                       evaluation_seed(cfg.seed, loc.set_id), cfg.workers)
                              .mean;
        } else if (method == "jordan") {
          rec.seconds = detail::timed([&] { predicted = jordan_localize(g, truth->observation, config.sources); });
        } else {
          rec.seconds = detail::timed([&] { predicted = netsleuth_localize(g, truth->observation, config.sources); });
        }
        rec.distance = source_distance(g, predicted, truth->sources).total;
      } catch (const Error& e) {
        rec.status = detail::sanitize_status(std::string("failed: ") + e.what());
      }
      result.records.push_back(rec);
    }
  }
  std::stable_sort(result.records.begin(), result.records.end(), [](const RunRecord& a, const RunRecord& b) {
    return a.run != b.run ? a.run < b.run : a.method < b.method;
  });
  result.summaries = summarize(result.records, config.methods);
  return result;
}

/// Results CSV: `# key = value` metadata lines, the per-run table
/// (run,method,seed,distance,seconds,tau,status), a blank line, and the
/// per-method summary (method,mean,std). Without timings the seconds column
/// is left empty so reruns are byte-identical.
inline void write_results_csv(std::ostream& out, const ExperimentConfig& config, const ExperimentResult& result) {
  for (const auto& [key, value] : describe(config)) out << "# " << key << " = " << value << '\n';
  out << "# note = ablation.kernel selects the clustering space; the GP kernel is identical for gsg and rbf\n";
  out << "run,method,seed,distance,seconds,tau,status\n";
  for (const auto& r : result.records) {
    out << r.run << ',' << r.method << ',' << r.seed << ',';
    if (r.distance) out << *r.distance;
    out << ',';
    if (config.timings) out << format_real(r.seconds);
    out << ',';
    if (r.tau) out << format_real(*r.tau);
    out << ',' << r.status << '\n';
  }
  out << "\nmethod,mean,std\n";
  for (const auto& s : result.summaries) {
    out << s.method << ',' << format_real(s.mean) << ',' << format_real(s.stddev) << '\n';
  }
}

struct ScalingRecord {
  std::size_t size = 0;
  std::string method;
  std::size_t repetition = 0;
  double seconds = 0.0;
  std::string status = "ok";
};

/// Times each method on small-world graphs of the given sizes (graph
/// parameters otherwise from the template). BOSouL timings include building
/// the spectral basis.
inline std::vector<ScalingRecord> run_scaling_bench(const std::vector<std::size_t>& sizes,
                                                    const ExperimentConfig& config) {
  config.validate();
  if (!std::is_sorted(sizes.begin(), sizes.end())) throw Error("scaling sizes must be ascending");
  std::vector<ScalingRecord> out;
  for (std::size_t size : sizes) {
    GraphSpec desc = config.graph;
    if (desc.type == "edge_list") desc.type = "small_world";
    desc.nodes = size;
    desc.seed.reset();
    const std::uint64_t size_seed = derive_seed(config.seed, "scaling", size);
    Graph g;
    try {
      g = build_graph(desc, size_seed).graph;
    } catch (const Error& e) {
      for (const auto& m : config.methods) {
        out.push_back({size, m, 0, 0.0, detail::sanitize_status(std::string("failed: ") + e.what())});
      }
      continue;
    }

    BosoulConfig bosoul_cfg = config.bosoul;
    bosoul_cfg.sources = config.sources;
    bosoul_cfg.diffusion = config.diffusion;

    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      const std::uint64_t rep_seed = derive_seed(size_seed, "repetition", rep);
      std::optional<GroundTruth> truth;
      std::string truth_error;
      try {
        Rng rng(derive_seed(rep_seed, "truth"));
        truth = generate_ground_truth(g, config.sources, config.diffusion, config.observation_time, rng,
                                      bosoul_cfg.pool_size);
      } catch (const Error& e) {
        truth_error = e.what();
      }
      for (const auto& method : config.methods) {
        ScalingRecord rec;
        rec.size = size;
        rec.method = method;
        rec.repetition = rep;
        if (!truth) {
          rec.status = detail::sanitize_status("failed: " + truth_error);
          out.push_back(rec);
          continue;
        }
        try {
          if (method == "bosoul") {
            BosoulConfig cfg = bosoul_cfg;
            cfg.seed = derive_seed(rep_seed, "bosoul");
            rec.seconds = detail::timed([&] { bosoul_localize(g, truth->observation, cfg); });
          } else if (method == "jordan") {
            rec.seconds = detail::timed([&] { jordan_localize(g, truth->observation, config.sources); });
          } else {
            rec.seconds = detail::timed([&] { netsleuth_localize(g, truth->observation, config.sources); });
          }
        } catch (const Error& e) {
          rec.status = detail::sanitize_status(std::string("failed: ") + e.what());
        }
        out.push_back(rec);
      }
    }
  }
  return out;
}

inline void write_scaling_csv(std::ostream& out, const std::vector<ScalingRecord>& records) {
  out << "size,method,repetition,seconds,status\n";
  for (const auto& r : records) {
    out << r.size << ',' << r.method << ',' << r.repetition << ',';
    if (r.status == "ok") out << format_real(r.seconds);
    out << ',' << r.status << '\n';
  }
}

}  // namespace bosoul
