#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "bosoul/harness/config.hpp"
#include "bosoul/harness/experiment.hpp"
#include "bosoul/harness/io.hpp"
#include "oracles.hpp"

using namespace bosoul;

namespace {

ExperimentConfig quick_config() {
  ExperimentConfig c;
  c.graph.nodes = 150;
  c.graph.k_neighbors = 6;
  c.repetitions = 2;
  c.bosoul.pool_size = 10;
  c.bosoul.clusters = 4;
  c.bosoul.budget = 12;
  c.bosoul.rounds = 10;
  c.bosoul.truncate_to = 16;
  c.seed = 3;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  return std::system((std::string(BOSOUL_CLI_PATH) + " " + args + " 2>/dev/null").c_str());
}

}  // namespace

TEST(Config, ReadsKeysAndRejectsUnknown) {
  ExperimentConfig c;
  std::istringstream in(
      "# comment\n"
      "graph.nodes = 500\n"
      "diffusion.model = SI   # trailing comment\n"
      "experiment.methods = jordan, netsleuth\n"
      "ablation.sampling = random\n"
      "ablation.kernel = rbf\n");
  read_config(in, c);
  EXPECT_EQ(c.graph.nodes, 500u);
  EXPECT_EQ(c.diffusion.model, DiffusionModel::SI);
  EXPECT_EQ(c.methods, (std::vector<std::string>{"jordan", "netsleuth"}));
  EXPECT_EQ(c.bosoul.sampling, SamplingMode::Random);
  EXPECT_EQ(c.bosoul.cluster_space, SignalSpace::RawIndicator);

  std::istringstream bad("graph.nodes = 5\nbogus.key = 1\n");
  try {
    read_config(bad, c);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(apply_setting(c, "graph.nodes", "ten"), Error);
  EXPECT_THROW(apply_setting(c, "experiment.timings", "maybe"), Error);
  std::istringstream no_eq("graph.nodes 5\n");
  EXPECT_THROW(read_config(no_eq, c), ParseError);
}

TEST(Config, DescribeRoundTrips) {
  ExperimentConfig a = quick_config();
  a.diffusion.infection_rate = 0.123;
  ExperimentConfig b;
  for (const auto& [key, value] : describe(a)) {
    if (key == "graph.seed" && value == "derived") continue;
    apply_setting(b, key, value);
  }
  EXPECT_EQ(describe(a), describe(b));
}

TEST(Config, Validation) {
  ExperimentConfig c;
  c.repetitions = 0;
  EXPECT_THROW(c.validate(), Error);
  c = ExperimentConfig{};
  c.methods = {"lpsi"};
  EXPECT_THROW(c.validate(), Error);
  c = ExperimentConfig{};
  c.observation_time = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Io, SnapshotRoundTripAndErrors) {
  const std::vector<std::string> labels{"a", "b", "c"};
  const LabelIndex index(labels);
  const Snapshot s{Indicator{1, 0, 1}};
  std::ostringstream out;
  write_snapshot(out, s, index);
  std::istringstream in(out.str());
  EXPECT_EQ(read_snapshot(in, index), s);

  std::istringstream partial("b,1\n");
  EXPECT_EQ(read_snapshot(partial, index), (Snapshot{Indicator{0, 1, 0}}));
  std::istringstream bad_state("node_id,state\na,2\n");
  EXPECT_THROW(read_snapshot(bad_state, index), ParseError);
  std::istringstream unknown("z,1\n");
  EXPECT_THROW(read_snapshot(unknown, index), ParseError);
}

TEST(GroundTruth, Cases) {
  const Graph g = generate_small_world(100, 6, 0.1, 1);
  DiffusionConfig si;
  si.model = DiffusionModel::SI;
  si.infection_rate = 0.0;
  Rng rng(1);
  const GroundTruth t = generate_ground_truth(g, 3, si, 10, rng, 20);
  EXPECT_EQ(t.observation.states, t.sources.indicator());
  const auto pool = top_degree_nodes(g, 20);
  for (NodeId v : t.sources.members()) {
    EXPECT_NE(std::find(pool.begin(), pool.end(), v), pool.end());
    for (NodeId w : t.sources.members()) EXPECT_FALSE(g.has_edge(v, w));
  }

  Rng rng1(2);
  EXPECT_EQ(generate_ground_truth(g, 1, DiffusionConfig{}, 10, rng1, 50).sources.size(), 1u);

  std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
  Rng rng2(3);
  EXPECT_THROW(generate_ground_truth(Graph(3, tri), 2, DiffusionConfig{}, 5, rng2, 3), Error);
}

TEST(Experiment, SingleJordanRun) {
  ExperimentConfig c = quick_config();
  c.repetitions = 1;
  c.methods = {"jordan"};
  const ExperimentResult r = run_experiment(c);
  ASSERT_EQ(r.records.size(), 1u);
  ASSERT_EQ(r.summaries.size(), 1u);
  EXPECT_EQ(r.records[0].status, "ok");
  EXPECT_DOUBLE_EQ(r.summaries[0].mean, static_cast<double>(*r.records[0].distance));
}

TEST(Experiment, SummaryRecomputableFromRowsAndCsvDeterministic) {
  ExperimentConfig c = quick_config();
  c.repetitions = 3;
  const ExperimentResult r = run_experiment(c);
  EXPECT_EQ(r.records.size(), 9u);
  for (const auto& s : r.summaries) {
    std::vector<double> d;
    for (const auto& rec : r.records)
      if (rec.method == s.method) d.push_back(static_cast<double>(*rec.distance));
    double mean = 0.0;
    for (double x : d) mean += x;
    mean /= static_cast<double>(d.size());
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    EXPECT_NEAR(s.mean, mean, 1e-12);
    EXPECT_NEAR(s.stddev, std::sqrt(ss / static_cast<double>(d.size())), 1e-12);
  }
  for (const auto& rec : r.records) EXPECT_EQ(rec.tau.has_value(), rec.method == "bosoul");

  std::ostringstream a, b;
  write_results_csv(a, c, r);
  write_results_csv(b, c, run_experiment(c));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find("run,method,seed,distance,seconds,tau,status\n"), std::string::npos);
  EXPECT_NE(a.str().find("\nmethod,mean,std\n"), std::string::npos);
}

TEST(Experiment, PerRunFailuresAreRecorded) {
  ExperimentConfig c = quick_config();
  c.repetitions = 1;
  c.bosoul.budget = 500;  // more than C(10,3) = 120 candidates
  const ExperimentResult r = run_experiment(c);
  for (const auto& rec : r.records) {
    if (rec.method == "bosoul") {
      EXPECT_EQ(rec.status.rfind("failed", 0), 0u);
      EXPECT_FALSE(rec.distance.has_value());
    } else {
      EXPECT_EQ(rec.status, "ok");
    }
  }
}

TEST(Scaling, SmokeRun) {
  ExperimentConfig c = quick_config();
  c.repetitions = 1;
  const auto records = run_scaling_bench({200}, c);
  EXPECT_EQ(records.size(), 3u);
  for (const auto& r : records) {
    EXPECT_EQ(r.status, "ok");
    EXPECT_GE(r.seconds, 0.0);
  }
  EXPECT_THROW(run_scaling_bench({300, 200}, c), Error);
}

TEST(Cli, GenerateSimulateLocalizeRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "bosoul_cli_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string d = dir.string();
  ASSERT_EQ(run_cli("generate --graph.nodes 120 --graph.k_neighbors 6 --experiment.seed 4 --out " + d + "/g.txt"), 0);
  const std::string graph = "--graph.type edge_list --graph.path " + d + "/g.txt";
  ASSERT_EQ(run_cli("simulate " + graph + " --sources 3,60 --experiment.seed 4 --out " + d + "/o.csv"), 0);
  const std::string loc = "localize " + graph + " --snapshot " + d + "/o.csv --experiment.sources 2 " +
                          "--set bosoul.pool_size=8 --set bosoul.clusters=4 --set bosoul.budget=10 " +
                          "--set bosoul.rounds=10 --set bosoul.truncate_to=16";
  ASSERT_EQ(run_cli(loc + " --out " + d + "/r1.txt"), 0);
  ASSERT_EQ(run_cli(loc + " --out " + d + "/r2.txt"), 0);
  EXPECT_EQ(slurp(dir / "r1.txt"), slurp(dir / "r2.txt"));
  EXPECT_EQ(slurp(dir / "r1.txt").rfind("method=bosoul\nsources=", 0), 0u);
  EXPECT_NE(run_cli("localize " + graph + " --snapshot " + d + "/missing.csv"), 0);
  EXPECT_NE(run_cli("bogus"), 0);
  EXPECT_NE(run_cli("bench --set nope=1"), 0);
  ASSERT_EQ(run_cli("localize " + graph + " --snapshot " + d + "/o.csv --method jordan --experiment.sources 2 --out " +
                    d + "/j.txt"),
            0);
  EXPECT_EQ(slurp(dir / "j.txt").rfind("method=jordan\n", 0), 0u);
  std::filesystem::remove_all(dir);
}
