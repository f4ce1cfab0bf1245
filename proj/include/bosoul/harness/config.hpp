#pragma once

#include <charconv>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bosoul/diffusion.hpp"
#include "bosoul/localizer.hpp"

namespace bosoul {

struct GraphSpec {
  std::string type = "small_world";  // small_world | erdos_renyi | edge_list
  std::size_t nodes = 1000;
  std::size_t k_neighbors = 10;
  double rewire_p = 0.1;
  double edge_p = 0.01;
  std::string path;
  bool largest_component = true;
  std::optional<std::uint64_t> seed;  // derived from the master seed when unset
};

struct ExperimentConfig {
  GraphSpec graph;
  DiffusionConfig diffusion;
  std::size_t observation_time = 10;  // T*, steps simulated to produce o*
  std::size_t sources = 3;
  std::size_t repetitions = 10;
  std::vector<std::string> methods{"bosoul", "jordan", "netsleuth"};
  BosoulConfig bosoul;
  std::uint64_t seed = 0;
  std::string output;
  std::string cache_dir;
  bool timings = false;  // wall-clock makes output non-reproducible

  void validate() const {
    if (repetitions < 1) throw Error("repetitions must be at least 1");
    if (observation_time < 1) throw Error("observation time must be at least 1");
    if (sources < 1) throw Error("source count must be at least 1");
    if (methods.empty()) throw Error("no methods selected");
    for (const auto& m : methods) {
      if (m != "bosoul" && m != "jordan" && m != "netsleuth") throw Error("unknown method '" + m + "'");
    }
    diffusion.validate();
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error("bad value '" + value + "' for " + key);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double out = std::stod(value, &used);
    if (used == value.size()) return out;
  } catch (const std::exception&) {
  }
  throw Error("bad value '" + value + "' for " + key);
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw Error("bad boolean '" + value + "' for " + key);
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

struct ConfigKey {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
  const char* help;
};

inline const std::map<std::string, ConfigKey>& config_keys() {
  using C = ExperimentConfig;
  using S = const std::string&;
  static const std::map<std::string, ConfigKey> keys = {
      {"graph.type", {[](C& c, S v) { c.graph.type = v; }, [](const C& c) { return c.graph.type; },
                      "small_world | erdos_renyi | edge_list"}},
      {"graph.nodes", {[](C& c, S v) { c.graph.nodes = parse_number<std::size_t>("graph.nodes", v); },
                       [](const C& c) { return std::to_string(c.graph.nodes); }, "generated graph size"}},
      {"graph.k_neighbors",
       {[](C& c, S v) { c.graph.k_neighbors = parse_number<std::size_t>("graph.k_neighbors", v); },
        [](const C& c) { return std::to_string(c.graph.k_neighbors); }, "small-world lattice degree (even)"}},
      {"graph.rewire_p", {[](C& c, S v) { c.graph.rewire_p = parse_double("graph.rewire_p", v); },
                          [](const C& c) { return format_number(c.graph.rewire_p); }, "small-world rewiring probability"}},
      {"graph.edge_p", {[](C& c, S v) { c.graph.edge_p = parse_double("graph.edge_p", v); },
                        [](const C& c) { return format_number(c.graph.edge_p); }, "Erdos-Renyi edge probability"}},
      {"graph.path", {[](C& c, S v) { c.graph.path = v; }, [](const C& c) { return c.graph.path; },
                      "edge-list file for graph.type = edge_list"}},
      {"graph.lcc", {[](C& c, S v) { c.graph.largest_component = parse_bool("graph.lcc", v); },
                     [](const C& c) { return std::string(c.graph.largest_component ? "true" : "false"); },
                     "keep only the largest connected component"}},
      {"graph.seed", {[](C& c, S v) { c.graph.seed = parse_number<std::uint64_t>("graph.seed", v); },
                      [](const C& c) { return c.graph.seed ? std::to_string(*c.graph.seed) : std::string("derived"); },
                      "generator seed (default: derived from experiment.seed)"}},
      {"diffusion.model", {[](C& c, S v) { c.diffusion.model = parse_diffusion_model(v); },
                           [](const C& c) { return std::string(to_string(c.diffusion.model)); }, "SI | SIR | SIS | IC"}},
      {"diffusion.beta", {[](C& c, S v) { c.diffusion.infection_rate = parse_double("diffusion.beta", v); },
                          [](const C& c) { return format_number(c.diffusion.infection_rate); }, "infection rate"}},
      {"diffusion.gamma", {[](C& c, S v) { c.diffusion.recovery_rate = parse_double("diffusion.gamma", v); },
                           [](const C& c) { return format_number(c.diffusion.recovery_rate); }, "recovery rate"}},
      {"diffusion.max_steps",
       {[](C& c, S v) { c.diffusion.max_steps = parse_number<std::size_t>("diffusion.max_steps", v); },
        [](const C& c) { return std::to_string(c.diffusion.max_steps); }, "step cap per simulation round"}},
      {"diffusion.patience",
       {[](C& c, S v) { c.diffusion.patience = parse_number<std::size_t>("diffusion.patience", v); },
        [](const C& c) { return std::to_string(c.diffusion.patience); }, "non-improving steps before a round stops"}},
      {"experiment.observation_time",
       {[](C& c, S v) { c.observation_time = parse_number<std::size_t>("experiment.observation_time", v); },
        [](const C& c) { return std::to_string(c.observation_time); }, "steps simulated to produce the snapshot"}},
      {"experiment.sources", {[](C& c, S v) { c.sources = parse_number<std::size_t>("experiment.sources", v); },
                              [](const C& c) { return std::to_string(c.sources); }, "number of true sources"}},
      {"experiment.repetitions",
       {[](C& c, S v) { c.repetitions = parse_number<std::size_t>("experiment.repetitions", v); },
        [](const C& c) { return std::to_string(c.repetitions); }, "independent ground truths"}},
      {"experiment.methods", {[](C& c, S v) { c.methods = split_list(v); },
                              [](const C& c) {
                                std::string s;
                                for (const auto& m : c.methods) s += (s.empty() ? "" : ",") + m;
                                return s;
                              },
                              "comma list of bosoul, jordan, netsleuth"}},
      {"experiment.seed", {[](C& c, S v) { c.seed = parse_number<std::uint64_t>("experiment.seed", v); },
                           [](const C& c) { return std::to_string(c.seed); }, "master seed"}},
      {"experiment.output", {[](C& c, S v) { c.output = v; }, [](const C& c) { return c.output; },
                             "results CSV path"}},
      {"experiment.timings", {[](C& c, S v) { c.timings = parse_bool("experiment.timings", v); },
                              [](const C& c) { return std::string(c.timings ? "true" : "false"); },
                              "record wall-clock seconds (breaks byte-reproducibility)"}},
      {"bosoul.pool_size", {[](C& c, S v) { c.bosoul.pool_size = parse_number<std::size_t>("bosoul.pool_size", v); },
                            [](const C& c) { return std::to_string(c.bosoul.pool_size); }, "top-degree pool size a"}},
      {"bosoul.clusters", {[](C& c, S v) { c.bosoul.clusters = parse_number<std::size_t>("bosoul.clusters", v); },
                           [](const C& c) { return std::to_string(c.bosoul.clusters); }, "cluster count b"}},
      {"bosoul.samples_per_cluster",
       {[](C& c, S v) { c.bosoul.samples_per_cluster = parse_number<std::size_t>("bosoul.samples_per_cluster", v); },
        [](const C& c) { return std::to_string(c.bosoul.samples_per_cluster); }, "per-cluster draws per iteration"}},
      {"bosoul.budget", {[](C& c, S v) { c.bosoul.budget = parse_number<std::size_t>("bosoul.budget", v); },
                         [](const C& c) { return std::to_string(c.bosoul.budget); }, "total tau evaluations k"}},
      {"bosoul.rounds", {[](C& c, S v) { c.bosoul.rounds = parse_number<std::size_t>("bosoul.rounds", v); },
                         [](const C& c) { return std::to_string(c.bosoul.rounds); }, "simulation rounds per evaluation"}},
      {"bosoul.truncate_to",
       {[](C& c, S v) { c.bosoul.truncate_to = parse_number<std::size_t>("bosoul.truncate_to", v); },
        [](const C& c) { return std::to_string(c.bosoul.truncate_to); }, "Fourier coefficients used for clustering"}},
      {"bosoul.noise", {[](C& c, S v) { c.bosoul.noise = parse_double("bosoul.noise", v); },
                        [](const C& c) { return format_number(c.bosoul.noise); }, "GP noise on standardized targets"}},
      {"bosoul.noise_from_variance",
       {[](C& c, S v) { c.bosoul.noise_from_variance = parse_bool("bosoul.noise_from_variance", v); },
        [](const C& c) { return std::string(c.bosoul.noise_from_variance ? "true" : "false"); },
        "add per-evaluation Monte-Carlo variance to the GP noise"}},
      {"bosoul.non_adjacent",
       {[](C& c, S v) { c.bosoul.require_non_adjacent = parse_bool("bosoul.non_adjacent", v); },
        [](const C& c) { return std::string(c.bosoul.require_non_adjacent ? "true" : "false"); },
        "drop candidate sets containing adjacent nodes"}},
      {"bosoul.workers", {[](C& c, S v) { c.bosoul.workers = parse_number<unsigned>("bosoul.workers", v); },
                          [](const C& c) { return std::to_string(c.bosoul.workers); }, "threads for simulation rounds"}},
      {"ablation.sampling",
       {[](C& c, S v) {
          if (v == "gss") c.bosoul.sampling = SamplingMode::Stratified;
          else if (v == "random") c.bosoul.sampling = SamplingMode::Random;
          else throw Error("ablation.sampling must be gss or random");
        },
        [](const C& c) { return std::string(c.bosoul.sampling == SamplingMode::Stratified ? "gss" : "random"); },
        "gss | random"}},
      {"ablation.kernel",
       {[](C& c, S v) {
          if (v == "gsg") c.bosoul.cluster_space = SignalSpace::Spectral;
          else if (v == "rbf") c.bosoul.cluster_space = SignalSpace::RawIndicator;
          else throw Error("ablation.kernel must be gsg or rbf");
        },
        [](const C& c) { return std::string(c.bosoul.cluster_space == SignalSpace::Spectral ? "gsg" : "rbf"); },
        "gsg | rbf (selects the clustering space: spectral or raw indicator)"}},
      {"spectral.laplacian",
       {[](C& c, S v) {
          if (v == "combinatorial") c.bosoul.laplacian = LaplacianKind::Combinatorial;
          else if (v == "normalized") c.bosoul.laplacian = LaplacianKind::Normalized;
          else throw Error("spectral.laplacian must be combinatorial or normalized");
        },
        [](const C& c) {
          return std::string(c.bosoul.laplacian == LaplacianKind::Combinatorial ? "combinatorial" : "normalized");
        },
        "combinatorial | normalized"}},
      {"spectral.cache_dir", {[](C& c, S v) { c.cache_dir = v; }, [](const C& c) { return c.cache_dir; },
                              "directory for cached Laplacian bases (empty: no cache)"}},
  };
  return keys;
}

}  // namespace detail

inline void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  const auto& keys = detail::config_keys();
  auto it = keys.find(key);
  if (it == keys.end()) throw Error("unknown config key '" + key + "'");
  it->second.set(cfg, detail::trim(value));
}

/// Reads `key = value` lines ('#' starts a comment) on top of `cfg`.
inline void read_config(std::istream& in, ExperimentConfig& cfg) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    try {
      apply_setting(cfg, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
}

/// All keys with their current values, in key order.
inline std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, entry] : detail::config_keys()) out.emplace_back(key, entry.get(cfg));
  return out;
}

inline std::vector<std::pair<std::string, std::string>> config_help() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, entry] : detail::config_keys()) out.emplace_back(key, entry.help);
  return out;
}

}  // namespace bosoul
