#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "bosoul/generators.hpp"
#include "bosoul/sampler.hpp"
#include "oracles.hpp"

using namespace bosoul;

TEST(Candidates, Binomial) {
  EXPECT_EQ(binomial(50, 3), 19600u);
  EXPECT_EQ(binomial(8, 2), 28u);
  EXPECT_EQ(binomial(5, 5), 1u);
  EXPECT_EQ(binomial(3, 4), 0u);
}

TEST(Candidates, FiftyNodePoolSize) {
  const Graph g = generate_small_world(1000, 10, 0.1, 7);
  const CandidatePool pool = enumerate_candidate_sets(g, 50, 3);
  EXPECT_EQ(pool.size(), 19600u);
  EXPECT_EQ(pool.pool_nodes.size(), 50u);
  EXPECT_TRUE(std::is_sorted(pool.pool_nodes.begin(), pool.pool_nodes.end()));
}

TEST(Candidates, LexicographicSmallCase) {
  const Graph g = oracle::random_connected_graph(12, 0.3, 2);
  const CandidatePool pool = enumerate_candidate_sets(g, 4, 2);
  ASSERT_EQ(pool.size(), 6u);
  const auto& p = pool.pool_nodes;
  const std::vector<std::vector<NodeId>> expected{{p[0], p[1]}, {p[0], p[2]}, {p[0], p[3]},
                                                  {p[1], p[2]}, {p[1], p[3]}, {p[2], p[3]}};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(pool.sets[i].members(), expected[i]);
  EXPECT_EQ(enumerate_candidate_sets(g, 4, 4).size(), 1u);
}

TEST(Candidates, NonAdjacentFilter) {
  const Graph g = oracle::path_graph(5);
  CandidateOptions opt;
  opt.require_non_adjacent = true;
  const CandidatePool pool = enumerate_candidate_sets(g, 5, 2, opt);
  // C(5,2) minus the 4 path edges.
  EXPECT_EQ(pool.size(), 6u);
  for (const auto& s : pool.sets) EXPECT_FALSE(g.has_edge(s.members()[0], s.members()[1]));
  std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
  EXPECT_THROW(enumerate_candidate_sets(Graph(3, tri), 3, 2, opt), Error);
}

TEST(Candidates, LimitAndArgumentErrors) {
  const Graph g = oracle::path_graph(10);
  CandidateOptions opt;
  opt.limit = 10;
  EXPECT_THROW(enumerate_candidate_sets(g, 10, 3, opt), Error);
  EXPECT_THROW(enumerate_candidate_sets(g, 3, 4), Error);
  EXPECT_THROW(enumerate_candidate_sets(g, 11, 2), Error);
  EXPECT_THROW(enumerate_candidate_sets(g, 5, 0), Error);
}

TEST(Candidates, SpectralSignalsAreTransforms) {
  const Graph g = oracle::random_connected_graph(30, 0.1, 5);
  const SpectralBasis basis = build_basis(g);
  const CandidatePool pool = enumerate_candidates(g, basis, 6, 2, 10);
  ASSERT_EQ(pool.signals.rows(), 15);
  ASSERT_EQ(pool.signals.cols(), 10);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto sig = fourier_transform(basis, pool.sets[i], 10);
    EXPECT_LT((pool.signals.row(static_cast<Eigen::Index>(i)).transpose() - sig.coefficients).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

TEST(Candidates, IndicatorSignalsPreserveDistances) {
  const Graph g = oracle::random_connected_graph(30, 0.1, 6);
  CandidatePool pool = enumerate_candidate_sets(g, 7, 3);
  attach_indicator_signals(pool);
  for (std::size_t i = 0; i < pool.size(); i += 3) {
    for (std::size_t j = 0; j < pool.size(); j += 5) {
      const double d2 = (pool.signals.row(static_cast<Eigen::Index>(i)) - pool.signals.row(static_cast<Eigen::Index>(j)))
                            .squaredNorm();
      EXPECT_DOUBLE_EQ(d2, squared_indicator_distance(pool.sets[i], pool.sets[j]));
    }
  }
}

TEST(KMeans, SeparatedBlobsBeatRandomAssignments) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z(0.0, 0.3);
  Eigen::MatrixXd pts(60, 2);
  for (int i = 0; i < 60; ++i) {
    const double cx = i < 30 ? 0.0 : 10.0;
    pts(i, 0) = cx + z(rng);
    pts(i, 1) = z(rng);
  }
  const KMeansResult km = kmeans(pts, 2, 5);
  for (int i = 1; i < 30; ++i) EXPECT_EQ(km.assignment[i], km.assignment[0]);
  for (int i = 31; i < 60; ++i) EXPECT_EQ(km.assignment[i], km.assignment[30]);
  EXPECT_NE(km.assignment[0], km.assignment[30]);
  EXPECT_NEAR(km.inertia, kmeans_inertia(pts, km.assignment, 2), 1e-9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::size_t> random_assignment(60);
    for (auto& a : random_assignment) a = rng() % 2;
    EXPECT_LE(km.inertia, kmeans_inertia(pts, random_assignment, 2));
  }
}

TEST(KMeans, DeterministicGivenSeed) {
  std::mt19937_64 rng(8);
  Eigen::MatrixXd pts = Eigen::MatrixXd::NullaryExpr(200, 4, [&] { return static_cast<double>(rng() % 1000) / 100.0; });
  const KMeansResult a = kmeans(pts, 7, 42);
  const KMeansResult b = kmeans(pts, 7, 42);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_THROW(kmeans(pts, 0, 1), Error);
  EXPECT_THROW(kmeans(pts, 201, 1), Error);
}

TEST(Clustering, EdgeCasesOfClusterCount) {
  const Graph g = oracle::random_connected_graph(30, 0.1, 7);
  const SpectralBasis basis = build_basis(g);
  const CandidatePool pool = enumerate_candidates(g, basis, 5, 2, 30);
  const CandidatePool one = cluster_candidates(pool, 1, 1);
  EXPECT_EQ(one.cluster_members.size(), 1u);
  EXPECT_EQ(one.cluster_members[0].size(), pool.size());
  const CandidatePool each = cluster_candidates(pool, pool.size(), 1);
  for (const auto& members : each.cluster_members) EXPECT_EQ(members.size(), 1u);
  EXPECT_THROW(cluster_candidates(pool, pool.size() + 1, 1), Error);
  CandidatePool bare = enumerate_candidate_sets(g, 5, 2);
  EXPECT_THROW(cluster_candidates(bare, 2, 1), Error);
}

TEST(Clustering, EveryClusterNonempty) {
  const Graph g = generate_small_world(300, 8, 0.1, 1);
  const SpectralBasis basis = build_basis(g);
  const CandidatePool pool = cluster_candidates(enumerate_candidates(g, basis, 20, 3, 64), 20, 9);
  EXPECT_EQ(pool.clusters, 20u);
  std::size_t total = 0;
  for (const auto& members : pool.cluster_members) {
    EXPECT_FALSE(members.empty());
    total += members.size();
  }
  EXPECT_EQ(total, pool.size());
}

namespace {

CandidatePool clustered_pool() {
  const Graph g = generate_small_world(200, 6, 0.1, 3);
  const SpectralBasis basis = build_basis(g);
  return cluster_candidates(enumerate_candidates(g, basis, 15, 2, 32), 6, 4);
}

}  // namespace

TEST(Gss, OnePerClusterAndProperties) {
  const CandidatePool pool = clustered_pool();
  Rng rng(1);
  const auto ids = gss_sample(pool, 1, rng);
  ASSERT_EQ(ids.size(), 6u);
  for (std::size_t c = 0; c < 6; ++c) EXPECT_EQ(pool.assignment[ids[c]], c);

  Rng rng2(2);
  std::vector<std::size_t> exclude{ids[0], ids[3], 5, 17};
  const auto batch = gss_sample(pool, 4, rng2, exclude);
  std::set<std::size_t> seen;
  for (auto id : batch) {
    EXPECT_LT(id, pool.size());
    EXPECT_TRUE(seen.insert(id).second);
    EXPECT_EQ(std::count(exclude.begin(), exclude.end(), id), 0);
  }
}

TEST(Gss, ExcludedClusterContributesNothing) {
  const CandidatePool pool = clustered_pool();
  const auto& excluded = pool.cluster_members[2];
  Rng rng(3);
  const auto ids = gss_sample(pool, 2, rng, excluded);
  for (auto id : ids) EXPECT_NE(pool.assignment[id], 2u);
  std::vector<std::size_t> all(pool.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  EXPECT_THROW(gss_sample(pool, 1, rng, all), Error);
  EXPECT_THROW(random_sample(pool, 3, rng, all), Error);
}

TEST(Gss, DeterministicGivenSeed) {
  const CandidatePool pool = clustered_pool();
  Rng a(10), b(10);
  EXPECT_EQ(gss_sample(pool, 3, a), gss_sample(pool, 3, b));
  Rng c(10), d(10);
  EXPECT_EQ(random_sample(pool, 9, c), random_sample(pool, 9, d));
}

// Synthetic strata: equal-size groups with small within-group spread.
TEST(Gss, StratifiedMeanUnbiasedAndLowerVariance) {
  std::mt19937_64 gen(5);
  const std::size_t groups = 20, per_group = 500;
  std::normal_distribution<double> centre(0.0, 1.0);
  CandidatePool pool;
  pool.clusters = groups;
  pool.cluster_members.assign(groups, {});
  std::vector<double> values;
  for (std::size_t c = 0; c < groups; ++c) {
    const double mu = centre(gen);
    std::normal_distribution<double> within(mu, 0.2);
    for (std::size_t i = 0; i < per_group; ++i) {
      pool.cluster_members[c].push_back(values.size());
      pool.assignment.push_back(c);
      values.push_back(within(gen));
    }
  }
  pool.sets.resize(values.size());
  double pop_mean = 0.0;
  for (double v : values) pop_mean += v;
  pop_mean /= static_cast<double>(values.size());

  Rng rng(6);
  const int trials = 20000;
  double s_sum = 0.0, s_sq = 0.0, r_sum = 0.0, r_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    double s = 0.0, r = 0.0;
    for (auto id : gss_sample(pool, 1, rng)) s += values[id];
    for (auto id : random_sample(pool, groups, rng)) r += values[id];
    s /= groups;
    r /= groups;
    s_sum += s;
    s_sq += s * s;
    r_sum += r;
    r_sq += r * r;
  }
  const double s_mean = s_sum / trials, r_mean = r_sum / trials;
  const double s_var = s_sq / trials - s_mean * s_mean;
  const double r_var = r_sq / trials - r_mean * r_mean;
  EXPECT_NEAR(s_mean, pop_mean, 3.0 * std::sqrt(s_var / trials));
  EXPECT_LT(s_var, r_var);
}
