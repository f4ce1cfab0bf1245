// Command-line front end: generate, simulate, localize, bench, scaling.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bosoul/bosoul.hpp"
#include "bosoul/harness/config.hpp"
#include "bosoul/harness/experiment.hpp"
#include "bosoul/harness/io.hpp"

namespace {

using namespace bosoul;

// Config sources shared by every subcommand. Precedence: defaults, then the
// config file, then `--<key>` flags, then `--set key=value`.
struct ConfigOptions {
  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
};

void add_config_options(CLI::App* app, ConfigOptions& opts) {
  app->add_option("--config", opts.config_path, "key = value config file")->check(CLI::ExistingFile);
  app->add_option("--set", opts.sets, "override a config key (key=value), repeatable");
  for (const auto& [key, help] : config_help()) {
    app->add_option("--" + key, opts.flags[key], help);
  }
}

ExperimentConfig resolve_config(CLI::App* app, const ConfigOptions& opts) {
  ExperimentConfig cfg;
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) throw Error("cannot open config '" + opts.config_path + "'");
    read_config(in, cfg);
  }
  for (const auto& [key, value] : opts.flags) {
    if (app->count("--" + key) > 0) apply_setting(cfg, key, value);
  }
  for (const auto& s : opts.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error("--set expects key=value, got '" + s + "'");
    apply_setting(cfg, detail::trim(s.substr(0, eq)), s.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

// Writes to `path`, or stdout when it is empty or "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  fn(out);
  if (!out) throw Error("write to '" + path + "' failed");
}

NodeSet parse_source_labels(const std::string& list, const LabelIndex& labels) {
  std::vector<NodeId> ids;
  for (const auto& label : detail::split_list(list)) ids.push_back(labels.id(label));
  return NodeSet(labels.size(), std::move(ids));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-source diffusion source localization with Bayesian optimization"};

  bool list_keys = false;
  app.add_flag("--list-keys", list_keys, "print every config key and exit");

  ConfigOptions gen_opts;
  std::string gen_out;
  std::string gen_labels;
  auto* gen = app.add_subcommand("generate", "build a graph and write it as an edge list");
  add_config_options(gen, gen_opts);
  gen->add_option("--out", gen_out, "edge-list output (default stdout)");
  gen->add_option("--label-map", gen_labels, "write node_id,label CSV mapping ids to original labels");

  ConfigOptions sim_opts;
  std::string sim_sources;
  std::optional<std::size_t> sim_steps;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "spread from given sources and write the snapshot");
  add_config_options(sim, sim_opts);
  sim->add_option("--sources", sim_sources, "comma-separated source labels")->required();
  sim->add_option("--steps", sim_steps, "steps to simulate (default experiment.observation_time)");
  sim->add_option("--out", sim_out, "snapshot CSV output (default stdout)");

  ConfigOptions loc_opts;
  std::string loc_snapshot;
  std::string loc_method = "bosoul";
  std::string loc_out;
  auto* loc = app.add_subcommand("localize", "localize sources from a snapshot");
  add_config_options(loc, loc_opts);
  loc->add_option("--snapshot", loc_snapshot, "node_id,state CSV")->required()->check(CLI::ExistingFile);
  loc->add_option("--method", loc_method, "bosoul | jordan | netsleuth")
      ->check(CLI::IsMember({"bosoul", "jordan", "netsleuth"}));
  loc->add_option("--out", loc_out, "report output (default stdout)");

  ConfigOptions bench_opts;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "run repeated experiments and write the results CSV");
  add_config_options(bench, bench_opts);
  bench->add_option("--out", bench_out, "results CSV (default experiment.output, else stdout)");

  ConfigOptions scale_opts;
  std::vector<std::size_t> scale_sizes{1000, 2000, 3000};
  std::string scale_out;
  auto* scale = app.add_subcommand("scaling", "time each method across graph sizes");
  add_config_options(scale, scale_opts);
  scale->add_option("--sizes", scale_sizes, "ascending node counts")->delimiter(',');
  scale->add_option("--out", scale_out, "timing CSV (default stdout)");

  app.require_subcommand(0, 1);
  CLI11_PARSE(app, argc, argv);

  try {
    if (list_keys) {
      for (const auto& [key, help] : config_help()) std::cout << key << "\t" << help << '\n';
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return 2;
    }

    if (*gen) {
      const ExperimentConfig cfg = resolve_config(gen, gen_opts);
      const PreparedGraph g = build_graph(cfg.graph, cfg.seed);
      with_output(gen_out, [&](std::ostream& out) { write_edge_list(out, g.graph); });
      if (!gen_labels.empty()) {
        with_output(gen_labels, [&](std::ostream& out) { write_label_map(out, g.labels); });
      }
    } else if (*sim) {
      const ExperimentConfig cfg = resolve_config(sim, sim_opts);
      const PreparedGraph g = build_graph(cfg.graph, cfg.seed);
      const LabelIndex labels(g.labels);
      const NodeSet sources = parse_source_labels(sim_sources, labels);
      const Snapshot s = simulate(g.graph, sources, cfg.diffusion, sim_steps.value_or(cfg.observation_time),
                                  derive_seed(cfg.seed, "simulate"));
      with_output(sim_out, [&](std::ostream& out) { write_snapshot(out, s, labels); });
    } else if (*loc) {
      const ExperimentConfig cfg = resolve_config(loc, loc_opts);
      const PreparedGraph g = build_graph(cfg.graph, cfg.seed);
      const LabelIndex labels(g.labels);
      std::ifstream in(loc_snapshot);
      const Snapshot o_star = read_snapshot(in, labels);
      if (loc_method == "bosoul") {
        BosoulConfig bcfg = cfg.bosoul;
        bcfg.sources = cfg.sources;
        bcfg.diffusion = cfg.diffusion;
        bcfg.seed = derive_seed(cfg.seed, "bosoul");
        std::optional<SpectralBasis> basis;
        if (bcfg.cluster_space == SignalSpace::Spectral) {
          basis = cfg.cache_dir.empty() ? build_basis(g.graph, bcfg.laplacian)
                                        : cached_basis(g.graph, cfg.cache_dir, bcfg.laplacian);
        }
        const CandidatePool pool = prepare_candidates(g.graph, bcfg, basis ? &*basis : nullptr);
        const LocalizationResult r = bosoul_localize(g.graph, o_star, bcfg, pool);
        with_output(loc_out, [&](std::ostream& out) { write_report(out, "bosoul", r.sources, labels, &r, cfg.timings); });
      } else {
        const NodeSet found = loc_method == "jordan" ? jordan_localize(g.graph, o_star, cfg.sources)
                                                     : netsleuth_localize(g.graph, o_star, cfg.sources);
        with_output(loc_out, [&](std::ostream& out) { write_report(out, loc_method, found, labels, nullptr, false); });
      }
    } else if (*bench) {
      const ExperimentConfig cfg = resolve_config(bench, bench_opts);
      const ExperimentResult result = run_experiment(cfg);
      with_output(bench_out.empty() ? cfg.output : bench_out,
                  [&](std::ostream& out) { write_results_csv(out, cfg, result); });
    } else if (*scale) {
      const ExperimentConfig cfg = resolve_config(scale, scale_opts);
      const auto records = run_scaling_bench(scale_sizes, cfg);
      with_output(scale_out, [&](std::ostream& out) { write_scaling_csv(out, records); });
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
