#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "bosoul/graph.hpp"
#include "bosoul/rng.hpp"

namespace bosoul {

enum class DiffusionModel { SI, SIR, SIS, IC };

inline std::string_view to_string(DiffusionModel m) {
  switch (m) {
    case DiffusionModel::SI: return "SI";
    case DiffusionModel::SIR: return "SIR";
    case DiffusionModel::SIS: return "SIS";
    case DiffusionModel::IC: return "IC";
  }
  return "?";
}

inline DiffusionModel parse_diffusion_model(std::string_view s) {
  std::string up(s);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "SI") return DiffusionModel::SI;
  if (up == "SIR") return DiffusionModel::SIR;
  if (up == "SIS") return DiffusionModel::SIS;
  if (up == "IC") return DiffusionModel::IC;
  throw Error("unknown diffusion model '" + std::string(s) + "'");
}

struct DiffusionConfig {
  DiffusionModel model = DiffusionModel::SIR;
  double infection_rate = 0.1;  // β; per-edge activation probability for IC
  double recovery_rate = 0.1;   // γ; SIR and SIS only
  std::size_t max_steps = 50;
  std::size_t patience = 5;     // non-improving steps tolerated by estimate_tau

  void validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(infection_rate)) throw Error("infection rate outside [0,1]");
    if (!prob(recovery_rate)) throw Error("recovery rate outside [0,1]");
    if (max_steps < 1) throw Error("max_steps must be at least 1");
    if (patience < 1) throw Error("patience must be at least 1");
  }
};

/// Observed node states: 1 = infected/active at observation time.
struct Snapshot {
  Indicator states;

  std::size_t size() const noexcept { return states.size(); }
  std::size_t infected_count() const noexcept {
    return static_cast<std::size_t>(std::count(states.begin(), states.end(), std::uint8_t{1}));
  }
  std::vector<NodeId> infected_nodes() const {
    std::vector<NodeId> out;
    for (std::size_t v = 0; v < states.size(); ++v) {
      if (states[v]) out.push_back(static_cast<NodeId>(v));
    }
    return out;
  }
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

enum class NodeState : std::uint8_t { Susceptible, Infected, Recovered };

/// Infection and recovery draw from separate streams, so SIR with γ = 0
/// consumes exactly the draws SI does and the two trajectories coincide.
struct SpreadRng {
  Rng infection;
  Rng recovery;

  explicit SpreadRng(std::uint64_t seed)
      : infection(derive_seed(seed, "infection")), recovery(derive_seed(seed, "recovery")) {}
};

/// Mutable state of one diffusion run.
///
/// For IC, "Infected" means ever-activated; only the last step's activations
/// still spread. The node lists touched by the last step are exposed so
/// callers can track derived quantities incrementally.
class SpreadState {
 public:
  SpreadState(const Graph& g, const NodeSet& sources, DiffusionModel model)
      : model_(model), states_(g.num_nodes(), NodeState::Susceptible), marked_(g.num_nodes(), 0) {
    if (sources.universe() != g.num_nodes()) throw Error("source set does not match graph size");
    for (NodeId v : sources.members()) states_[v] = NodeState::Infected;
    spreaders_ = sources.members();
  }

  DiffusionModel model() const noexcept { return model_; }
  const std::vector<NodeState>& states() const noexcept { return states_; }
  NodeState state(NodeId v) const { return states_[v]; }

  /// Nodes that are currently able to transmit.
  const std::vector<NodeId>& spreaders() const noexcept { return spreaders_; }
  const std::vector<NodeId>& last_infected() const noexcept { return newly_infected_; }
  const std::vector<NodeId>& last_cleared() const noexcept { return newly_cleared_; }

  /// No further transition is possible.
  bool absorbed() const noexcept { return spreaders_.empty(); }

  /// One synchronous step. Infection attempts use start-of-step states;
  /// recovery of start-of-step infecteds is evaluated afterwards.
  void step(const Graph& g, const DiffusionConfig& cfg, SpreadRng& rng) {
    newly_infected_.clear();
    newly_cleared_.clear();
    const double beta = cfg.infection_rate;

    for (NodeId u : spreaders_) {
      for (NodeId v : g.neighbors(u)) {
        if (states_[v] != NodeState::Susceptible || marked_[v]) continue;
        if (bernoulli(rng.infection, beta)) {
          marked_[v] = 1;
          newly_infected_.push_back(v);
        }
      }
    }

    if (model_ == DiffusionModel::IC) {
      // Each activation gets one round of attempts, then stops spreading.
      for (NodeId v : newly_infected_) {
        states_[v] = NodeState::Infected;
        marked_[v] = 0;
      }
      spreaders_ = newly_infected_;
      return;
    }

    if (model_ == DiffusionModel::SIR || model_ == DiffusionModel::SIS) {
      const NodeState after = model_ == DiffusionModel::SIR ? NodeState::Recovered : NodeState::Susceptible;
      std::size_t kept = 0;
      for (NodeId u : spreaders_) {
        if (bernoulli(rng.recovery, cfg.recovery_rate)) {
          states_[u] = after;
          newly_cleared_.push_back(u);
        } else {
          spreaders_[kept++] = u;
        }
      }
      spreaders_.resize(kept);
    }

    for (NodeId v : newly_infected_) {
      states_[v] = NodeState::Infected;
      marked_[v] = 0;
      spreaders_.push_back(v);
    }
  }

  std::uint8_t snapshot_bit(NodeId v) const { return states_[v] == NodeState::Infected ? 1 : 0; }

  Snapshot snapshot() const {
    Snapshot s{Indicator(states_.size(), 0)};
    for (std::size_t v = 0; v < states_.size(); ++v) s.states[v] = states_[v] == NodeState::Infected;
    return s;
  }

 private:
  DiffusionModel model_;
  std::vector<NodeState> states_;
  std::vector<std::uint8_t> marked_;
  std::vector<NodeId> spreaders_;
  std::vector<NodeId> newly_infected_;
  std::vector<NodeId> newly_cleared_;
};

inline void step(SpreadState& state, const Graph& g, const DiffusionConfig& cfg, SpreadRng& rng) {
  state.step(g, cfg, rng);
}

inline Snapshot snapshot_of(const SpreadState& state) { return state.snapshot(); }

/// Runs `steps` steps from `sources` and returns the final snapshot.
inline Snapshot simulate(const Graph& g, const NodeSet& sources, const DiffusionConfig& cfg, std::size_t steps,
                         std::uint64_t seed) {
  cfg.validate();
  SpreadState state(g, sources, cfg.model);
  SpreadRng rng(seed);
  for (std::size_t t = 0; t < steps && !state.absorbed(); ++t) state.step(g, cfg, rng);
  return state.snapshot();
}

/// N − Hamming(o, o*).
inline std::size_t similarity(const Snapshot& o, const Snapshot& o_star) {
  if (o.size() != o_star.size()) throw Error("snapshot lengths differ");
  std::size_t mismatches = 0;
  for (std::size_t v = 0; v < o.size(); ++v) mismatches += (o.states[v] != o_star.states[v]);
  return o.size() - mismatches;
}

struct TauEstimate {
  double mean = 0.0;
  double variance = 0.0;  // sample variance of the per-round maxima
  std::vector<std::size_t> round_maxima;
};

/// Seed of round `round` of an estimate seeded with `seed`.
inline std::uint64_t round_seed(std::uint64_t seed, std::size_t round) {
  return derive_seed(seed, "round", round);
}

/// Peak similarity of one diffusion run against o*, t = 0 included. The run
/// stops after `patience` consecutive steps without a new peak, at
/// `max_steps`, or once the dynamics are absorbed.
inline std::size_t peak_similarity(const Graph& g, const NodeSet& sources, const Snapshot& o_star,
                                   const DiffusionConfig& cfg, std::uint64_t seed) {
  SpreadState state(g, sources, cfg.model);
  SpreadRng rng(seed);
  const std::size_t n = g.num_nodes();

  // Hamming distance to o*, maintained as nodes flip.
  std::size_t mismatches = o_star.infected_count();
  auto flip = [&](NodeId v) {
    if (o_star.states[v] == state.snapshot_bit(v)) {
      --mismatches;
    } else {
      ++mismatches;
    }
  };
  for (NodeId v : sources.members()) flip(v);

  std::size_t best = n - mismatches;
  std::size_t stale = 0;
  for (std::size_t t = 0; t < cfg.max_steps && stale < cfg.patience && !state.absorbed(); ++t) {
    state.step(g, cfg, rng);
    for (NodeId v : state.last_infected()) flip(v);
    for (NodeId v : state.last_cleared()) flip(v);
    const std::size_t sim = n - mismatches;
    if (sim > best) {
      best = sim;
      stale = 0;
    } else {
      ++stale;
    }
  }
  return best;
}

/// τ(s) = mean over rounds of the per-round peak similarity. Round r uses
/// round_seed(seed, r), and the mean is summed in round order, so the value
/// does not depend on `workers`.
inline TauEstimate estimate_tau(const Graph& g, const NodeSet& s, const Snapshot& o_star, const DiffusionConfig& cfg,
                                std::size_t rounds, std::uint64_t seed, unsigned workers = 1) {
  cfg.validate();
  if (s.empty()) throw Error("estimate_tau needs a nonempty source set");
  if (rounds < 1) throw Error("estimate_tau needs at least one round");
  if (o_star.size() != g.num_nodes()) throw Error("snapshot length does not match graph");
  if (s.universe() != g.num_nodes()) throw Error("source set does not match graph size");

  TauEstimate out;
  out.round_maxima.resize(rounds);
  auto run = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t r = begin; r < rounds; r += stride) {
      out.round_maxima[r] = peak_similarity(g, s, o_star, cfg, round_seed(seed, r));
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(rounds)));
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
  }

  double sum = 0.0;
  for (std::size_t m : out.round_maxima) sum += static_cast<double>(m);
  out.mean = sum / static_cast<double>(rounds);
  if (rounds > 1) {
    double ss = 0.0;
    for (std::size_t m : out.round_maxima) ss += (static_cast<double>(m) - out.mean) * (static_cast<double>(m) - out.mean);
    out.variance = ss / static_cast<double>(rounds - 1);
  }
  return out;
}

}  // namespace bosoul
