#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bosoul/diffusion.hpp"
#include "bosoul/generators.hpp"
#include "oracles.hpp"

using namespace bosoul;

namespace {

DiffusionConfig config(DiffusionModel m, double beta, double gamma = 0.0) {
  DiffusionConfig c;
  c.model = m;
  c.infection_rate = beta;
  c.recovery_rate = gamma;
  return c;
}

Snapshot snap(Indicator bits) { return Snapshot{std::move(bits)}; }

}  // namespace

TEST(Diffusion, ParseModelNames) {
  EXPECT_EQ(parse_diffusion_model("SIR"), DiffusionModel::SIR);
  EXPECT_EQ(parse_diffusion_model("si"), DiffusionModel::SI);
  EXPECT_EQ(to_string(DiffusionModel::IC), "IC");
  EXPECT_THROW(parse_diffusion_model("SEIR"), Error);
}

TEST(Diffusion, ConfigValidation) {
  EXPECT_THROW(config(DiffusionModel::SI, 1.5).validate(), Error);
  EXPECT_THROW(config(DiffusionModel::SIR, 0.1, -0.1).validate(), Error);
  DiffusionConfig c;
  c.patience = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Diffusion, SiDeterministicFrontOnPath) {
  const Graph g = oracle::path_graph(3);
  const auto cfg = config(DiffusionModel::SI, 1.0);
  SpreadState s(g, NodeSet(3, {0}), cfg.model);
  SpreadRng rng(1);
  s.step(g, cfg, rng);
  EXPECT_EQ(s.snapshot(), snap({1, 1, 0}));
  s.step(g, cfg, rng);
  EXPECT_EQ(s.snapshot(), snap({1, 1, 1}));
}

TEST(Diffusion, ZeroInfectionRateFreezesSi) {
  const Graph g = oracle::cycle_graph(6);
  const Snapshot s = simulate(g, NodeSet(6, {2}), config(DiffusionModel::SI, 0.0), 20, 4);
  EXPECT_EQ(s, snap({0, 0, 1, 0, 0, 0}));
}

TEST(Diffusion, SirCertainRecovery) {
  const Graph g = oracle::path_graph(3);
  const auto cfg = config(DiffusionModel::SIR, 0.0, 1.0);
  SpreadState s(g, NodeSet(3, {0}), cfg.model);
  SpreadRng rng(1);
  s.step(g, cfg, rng);
  EXPECT_EQ(s.state(0), NodeState::Recovered);
  EXPECT_EQ(s.snapshot(), snap({0, 0, 0}));
  EXPECT_TRUE(s.absorbed());
}

TEST(Diffusion, RecoveredMapsToZero) {
  // 0 infects 1 with certainty and recovers in the same step; 1 then
  // infects 2 and recovers.
  const Graph g = oracle::path_graph(3);
  const auto cfg = config(DiffusionModel::SIR, 1.0, 1.0);
  SpreadState s(g, NodeSet(3, {0}), cfg.model);
  SpreadRng rng(2);
  s.step(g, cfg, rng);
  EXPECT_EQ(s.snapshot(), snap({0, 1, 0}));
  s.step(g, cfg, rng);
  EXPECT_EQ(s.snapshot(), snap({0, 0, 1}));
  EXPECT_EQ(s.state(0), NodeState::Recovered);
}

TEST(Diffusion, IcActivatesOnce) {
  const Graph g = oracle::path_graph(4);
  const auto cfg = config(DiffusionModel::IC, 1.0);
  SpreadState s(g, NodeSet(4, {0}), cfg.model);
  SpreadRng rng(3);
  s.step(g, cfg, rng);
  EXPECT_EQ(s.snapshot(), snap({1, 1, 0, 0}));
  EXPECT_EQ(s.spreaders(), (std::vector<NodeId>{1}));
  s.step(g, cfg, rng);
  s.step(g, cfg, rng);
  EXPECT_EQ(s.snapshot(), snap({1, 1, 1, 1}));
  s.step(g, cfg, rng);
  EXPECT_TRUE(s.absorbed());
}

TEST(Diffusion, AllSusceptibleSnapshotIsZero) {
  const Graph g = oracle::path_graph(4);
  SpreadState s(g, NodeSet(4, {}), DiffusionModel::SI);
  EXPECT_EQ(snapshot_of(s), snap({0, 0, 0, 0}));
}

TEST(Diffusion, SiMonotoneAndSirTransitionsLegal) {
  const Graph g = generate_small_world(200, 6, 0.1, 5);
  const auto si = config(DiffusionModel::SI, 0.2);
  SpreadState a(g, NodeSet(200, {0, 50}), si.model);
  SpreadRng ra(8);
  Snapshot prev = a.snapshot();
  for (int t = 0; t < 15; ++t) {
    a.step(g, si, ra);
    const Snapshot cur = a.snapshot();
    for (std::size_t v = 0; v < 200; ++v) ASSERT_GE(cur.states[v], prev.states[v]);
    prev = cur;
  }

  const auto sir = config(DiffusionModel::SIR, 0.3, 0.2);
  SpreadState b(g, NodeSet(200, {0, 50}), sir.model);
  SpreadRng rb(9);
  std::vector<NodeState> before = b.states();
  for (int t = 0; t < 30; ++t) {
    b.step(g, sir, rb);
    for (std::size_t v = 0; v < 200; ++v) {
      const NodeState x = before[v], y = b.states()[v];
      if (x == NodeState::Recovered) {
        ASSERT_EQ(y, NodeState::Recovered);
      }
      if (x == NodeState::Infected) {
        ASSERT_NE(y, NodeState::Susceptible);
      }
    }
    before = b.states();
  }
}

TEST(Diffusion, SirWithoutRecoveryEqualsSi) {
  const Graph g = generate_small_world(300, 8, 0.1, 6);
  const NodeSet src(300, {3, 100, 200});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EXPECT_EQ(simulate(g, src, config(DiffusionModel::SI, 0.15), 12, seed),
              simulate(g, src, config(DiffusionModel::SIR, 0.15, 0.0), 12, seed));
  }
}

TEST(Similarity, Examples) {
  EXPECT_EQ(similarity(snap(Indicator(10, 1)), snap(Indicator(10, 1))), 10u);
  EXPECT_EQ(similarity(snap(Indicator(10, 1)), snap(Indicator(10, 0))), 0u);
  EXPECT_EQ(similarity(snap({1, 1, 0, 0}), snap({1, 0, 1, 0})), 2u);
  EXPECT_THROW(similarity(snap({1}), snap({1, 0})), Error);
}

TEST(Tau, DegenerateDynamicsGiveSourceSimilarity) {
  const Graph g = oracle::cycle_graph(8);
  const NodeSet s(8, {1, 5});
  const Snapshot o_star = snap({0, 1, 1, 0, 0, 1, 0, 0});
  for (auto m : {DiffusionModel::SI, DiffusionModel::SIS, DiffusionModel::IC}) {
    const TauEstimate t = estimate_tau(g, s, o_star, config(m, 0.0), 20, 3);
    EXPECT_DOUBLE_EQ(t.mean, 7.0);
    EXPECT_DOUBLE_EQ(t.variance, 0.0);
  }
  const TauEstimate exact = estimate_tau(g, s, snap(s.indicator()), config(DiffusionModel::SI, 0.0), 5, 1);
  EXPECT_DOUBLE_EQ(exact.mean, 8.0);
}

TEST(Tau, DeterministicFrontPeaksAtStepOne) {
  const Graph g = oracle::path_graph(4);
  const TauEstimate t =
      estimate_tau(g, NodeSet(4, {0}), snap({1, 1, 0, 0}), config(DiffusionModel::SI, 1.0), 10, 5);
  EXPECT_DOUBLE_EQ(t.mean, 4.0);
  for (auto m : t.round_maxima) EXPECT_EQ(m, 4u);
}

TEST(Tau, CycleMatchesExhaustiveTrajectoryEnumeration) {
  const Graph g = oracle::cycle_graph(4);
  const DiffusionConfig cfg = config(DiffusionModel::SI, 0.5);
  const double expected = oracle::exact_si_tau(g, 0b0001, 0b0011, 0.5, cfg.patience, cfg.max_steps);
  // Frozen oracle value for patience 5, max_steps 50.
  EXPECT_NEAR(expected, 3.3330078125, 1e-9);
  const std::size_t rounds = 10000;
  const TauEstimate t = estimate_tau(g, NodeSet(4, {0}), snap({1, 1, 0, 0}), cfg, rounds, 99);
  const double se = std::sqrt(t.variance / static_cast<double>(rounds));
  EXPECT_NEAR(t.mean, expected, 3.0 * se);
}

TEST(Tau, IndependentOfWorkerCount) {
  const Graph g = generate_small_world(400, 8, 0.1, 2);
  const NodeSet s(400, {10, 150, 300});
  const Snapshot o = simulate(g, NodeSet(400, {12, 155, 290}), config(DiffusionModel::SIR, 0.1, 0.1), 10, 1);
  const auto cfg = config(DiffusionModel::SIR, 0.1, 0.1);
  const TauEstimate one = estimate_tau(g, s, o, cfg, 64, 77, 1);
  const TauEstimate four = estimate_tau(g, s, o, cfg, 64, 77, 4);
  EXPECT_EQ(one.round_maxima, four.round_maxima);
  EXPECT_EQ(one.mean, four.mean);
  EXPECT_EQ(one.variance, four.variance);
}

TEST(Tau, PeakTrackingMatchesFullRecomputation) {
  // Re-run the same stream step by step and recompute similarity from full
  // snapshots, applying the same stopping rule.
  const Graph g = generate_small_world(150, 6, 0.2, 4);
  const NodeSet s(150, {1, 70});
  const auto cfg = config(DiffusionModel::SIS, 0.25, 0.3);
  const Snapshot o = simulate(g, NodeSet(150, {2, 75}), cfg, 8, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SpreadState st(g, s, cfg.model);
    SpreadRng rng(seed);
    std::size_t best = similarity(st.snapshot(), o), stale = 0;
    for (std::size_t t = 0; t < cfg.max_steps && stale < cfg.patience && !st.absorbed(); ++t) {
      st.step(g, cfg, rng);
      const std::size_t sim = similarity(st.snapshot(), o);
      if (sim > best) {
        best = sim;
        stale = 0;
      } else {
        ++stale;
      }
    }
    EXPECT_EQ(peak_similarity(g, s, o, cfg, seed), best);
  }
}

TEST(Tau, ErrorPaths) {
  const Graph g = oracle::path_graph(3);
  const auto cfg = config(DiffusionModel::SI, 0.5);
  EXPECT_THROW(estimate_tau(g, NodeSet(3, {}), snap({1, 0, 0}), cfg, 5, 1), Error);
  EXPECT_THROW(estimate_tau(g, NodeSet(3, {0}), snap({1, 0, 0}), cfg, 0, 1), Error);
  EXPECT_THROW(estimate_tau(g, NodeSet(3, {0}), snap({1, 0}), cfg, 5, 1), Error);
}
