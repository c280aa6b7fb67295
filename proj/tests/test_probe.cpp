#include <gtest/gtest.h>

#include <cmath>

#include "probesim/exact.hpp"
#include "probesim/probe.hpp"
#include "test_util.hpp"

namespace probesim {
namespace {

using namespace testing;

TEST(BudgetParams, DefaultSplit) {
  const auto p = budget_params(0.1, 0.01, 0.6, 10000);
  EXPECT_DOUBLE_EQ(p.eps, 0.05);
  EXPECT_DOUBLE_EQ(p.eps_t, 0.05);
  EXPECT_NEAR(budget_sum(p), 0.1, 1e-15);
  // (3c / eps^2) ln(n / delta) = 720 * ln(1e6) = 9947.17.
  EXPECT_EQ(p.n_r, static_cast<std::uint64_t>(std::ceil(720.0 * std::log(1e6))));
  EXPECT_EQ(p.n_r, 9948u);
  EXPECT_EQ(p.ell_t, truncation_length(0.05, 0.6));
  EXPECT_EQ(p.strategy, ProbeStrategy::kHybrid);
  EXPECT_TRUE(p.batch);

  EXPECT_NEAR(budget_params(0.1, 0.01, 0.25, 100).eps_p, 0.5 / 1.05 * 0.025, 1e-15);
  EXPECT_NEAR(budget_params(0.1, 0.01, 0.25, 100).eps_p, 0.0119, 1e-4);
}

TEST(BudgetParams, Overrides) {
  const auto p = budget_params_with(0.1, 0.01, 0.6, 100, 0.02, 0.001);
  EXPECT_NEAR(budget_sum(p), 0.1, 1e-12);
  EXPECT_DOUBLE_EQ(p.eps_t, 0.02);
  const auto q = budget_params_with(0.1, 0.01, 0.6, 100, 0.0, 0.0);
  EXPECT_EQ(q.ell_t, kUnbounded);
  EXPECT_DOUBLE_EQ(q.eps, 0.1);
  EXPECT_THROW(budget_params_with(0.1, 0.01, 0.6, 100, 0.2, 0.0), ParameterError);
}

TEST(BudgetParams, Errors) {
  EXPECT_THROW(budget_params(0.0, 0.01, 0.6, 100), ParameterError);
  EXPECT_THROW(budget_params(0.1, 1.0, 0.6, 100), ParameterError);
  EXPECT_THROW(budget_params(0.1, 0.01, 1.2, 100), ParameterError);
  EXPECT_THROW(budget_params(1e-12, 0.01, 0.6, 100), ParameterError);
  EXPECT_THROW(parse_strategy("bogus"), ParameterError);
  EXPECT_EQ(parse_strategy("det"), ProbeStrategy::kDeterministic);
  EXPECT_EQ(parse_strategy("rand"), ProbeStrategy::kRandomized);
}

TEST(DeterministicProbe, FixtureScoreSets) {
  const auto g = toy_graph();
  const std::vector<NodeId> walk = {A, B, A, B};

  const auto s2 = deterministic_probe(g, std::span(walk).first(2), 0.25);
  EXPECT_EQ(s2.size(), 3u);
  EXPECT_NEAR(s2.get(C), 0.167, 1e-3);
  EXPECT_NEAR(s2.get(D), 0.5, 1e-12);
  EXPECT_NEAR(s2.get(E), 0.25, 1e-12);

  const auto s3 = deterministic_probe(g, std::span(walk).first(3), 0.25);
  EXPECT_EQ(s3.size(), 3u);
  EXPECT_NEAR(s3.get(F), 0.021, 1e-3);
  EXPECT_NEAR(s3.get(G), 0.028, 1e-3);
  EXPECT_NEAR(s3.get(H), 0.028, 1e-3);

  const auto s4 = deterministic_probe(g, walk, 0.25);
  EXPECT_EQ(s4.size(), 4u);
  EXPECT_NEAR(s4.get(B), 0.011, 1e-3);
  EXPECT_NEAR(s4.get(C), 0.033, 1e-3);
  EXPECT_NEAR(s4.get(E), 0.038, 1e-3);
  EXPECT_NEAR(s4.get(F), 0.019, 1e-3);
}

TEST(DeterministicProbe, MatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto g = random_graph(6, 0.4, seed);
    std::vector<std::vector<NodeId>> prefixes;
    for (std::size_t len = 2; len <= 4; ++len) enumerate_prefixes(g, len, prefixes);
    for (const auto& p : prefixes) {
      const auto s = deterministic_probe(g, p, 0.6);
      for (NodeId v = 0; v < 6; ++v) {
        if (v == p[0]) continue;
        ASSERT_NEAR(s.get(v), first_meeting_prob_bruteforce(g, 0.6, p, v), 1e-12);
      }
    }
  }
}

TEST(DeterministicProbe, PruningCutsSubtree) {
  const auto g = toy_graph();
  const std::vector<NodeId> walk = {A, B, A, B};
  const auto full = deterministic_probe(g, walk, 0.25, 0.0);
  const auto pruned = deterministic_probe(g, walk, 0.25, 0.05);
  // Level 1: c has 1/6 * 0.5^2 = 0.042 <= 0.05 and is dropped; d and e survive.
  // Without c at level 1 the remaining paths are from d and e only.
  const std::vector<NodeId> ab = {A, B};
  const auto level1 = deterministic_probe(g, ab, 0.25);
  EXPECT_LE(level1.get(C) * 0.25, 0.05);
  EXPECT_GT(level1.get(E) * 0.25, 0.05);
  bool strictly_less = false;
  for (NodeId v = 0; v < 8; ++v) {
    EXPECT_LE(pruned.get(v), full.get(v) + 1e-15);
    EXPECT_LE(full.get(v) - pruned.get(v), 0.05);
    if (pruned.get(v) < full.get(v) - 1e-12) strictly_less = true;
  }
  EXPECT_TRUE(strictly_less);
}

// Pruned mass at level j is at most eps_p / sqrt(c)^(i-j-1), and the inherited
// loss shrinks by sqrt(c) per level, so the final gap is at most (i - 1) eps_p.
TEST(DeterministicProbe, PruningGapPerLevelBound) {
  const auto g = toy_graph();
  std::vector<std::vector<NodeId>> prefixes;
  for (std::size_t len = 2; len <= 7; ++len) enumerate_prefixes(g, len, prefixes);
  for (double c : {0.25, 0.6}) {
    for (double eps_p : {0.0119, 0.02, 0.05}) {
      for (const auto& p : prefixes) {
        const auto full = deterministic_probe(g, p, c, 0.0);
        const auto pruned = deterministic_probe(g, p, c, eps_p);
        for (NodeId v = 0; v < 8; ++v) {
          const double gap = full.get(v) - pruned.get(v);
          ASSERT_GE(gap, 0.0);
          ASSERT_LE(gap, static_cast<double>(p.size() - 1) * eps_p + 1e-15);
        }
      }
    }
  }
}

// A single probe can lose more than eps_p: two pruning rounds stack.
TEST(DeterministicProbe, PruningGapCanExceedEpsP) {
  const auto g = toy_graph();
  const double eps_p = 0.5 / 1.05 * 0.025;
  const std::vector<NodeId> p = {A, C, B, A, C, B};
  const double exact = first_meeting_prob_bruteforce(g, 0.25, p, E);
  const double pruned = deterministic_probe(g, p, 0.25, eps_p).get(E);
  EXPECT_NEAR(exact - pruned, 0.01345486111111111, 1e-12);
  EXPECT_GT(exact - pruned, eps_p);
}

TEST(DeterministicProbe, Errors) {
  const auto g = toy_graph();
  const std::vector<NodeId> bad = {A, D};
  EXPECT_THROW(deterministic_probe(g, bad, 0.25), UsageError);
  const std::vector<NodeId> one = {A};
  EXPECT_THROW(deterministic_probe(g, one, 0.25), ParameterError);
}

TEST(Probe, DeadEndPrefixIsEmpty) {
  // 1 -> 0 only: the sole out-neighbor of 1 is the excluded u_1.
  const auto g = make_graph(2, {{1, 0}});
  const std::vector<NodeId> p = {0, 1};
  EXPECT_TRUE(deterministic_probe(g, p, 0.6).empty());
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(randomized_probe(g, p, 0.6, rng).empty());
}

TEST(RandomizedProbe, StarFrequency) {
  const auto g = make_graph(3, {{2, 0}, {2, 1}});
  const std::vector<NodeId> uw = {0, 2};
  Rng rng(2024);
  const int runs = 100000;
  int hits = 0;
  for (int i = 0; i < runs; ++i) {
    const auto sel = randomized_probe(g, uw, 0.6, rng);
    ASSERT_LE(sel.size(), 1u);
    if (!sel.empty()) {
      EXPECT_EQ(sel[0], 1u);
      ++hits;
    }
  }
  EXPECT_NEAR(static_cast<double>(hits) / runs, std::sqrt(0.6), 0.006);
}

TEST(RandomizedProbe, FrequencyMatchesScores) {
  const auto g = random_graph_min_in(7, 0.35, 13);
  std::vector<std::vector<NodeId>> prefixes;
  enumerate_prefixes(g, 4, prefixes);
  ASSERT_FALSE(prefixes.empty());
  const auto& p = prefixes[prefixes.size() / 2];
  const auto exact = deterministic_probe(g, p, 0.6);
  const int runs = 50000;
  std::vector<int> hits(g.num_nodes(), 0);
  Rng rng(99);
  for (int i = 0; i < runs; ++i)
    for (NodeId v : randomized_probe(g, p, 0.6, rng)) ++hits[v];
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const double q = exact.get(v);
    EXPECT_NEAR(static_cast<double>(hits[v]) / runs, q, 4 * std::sqrt(q * (1 - q) / runs) + 1e-12);
  }
}

TEST(ProbeDispatch, LargeWeightIsDeterministic) {
  const auto g = random_graph_min_in(20, 0.3, 7);
  std::vector<std::vector<NodeId>> prefixes;
  enumerate_prefixes(g, 4, prefixes);
  auto params = budget_params(0.1, 0.01, 0.6, g.num_nodes());
  params.eps_p = 0.0;
  Rng rng(5);
  for (std::size_t i = 0; i < prefixes.size(); i += 97) {
    const auto det = deterministic_probe(g, prefixes[i], 0.6);
    const auto hyb = probe_dispatch(g, prefixes[i], 1u << 30, params, rng);
    ASSERT_EQ(det.size(), hyb.size());
    for (const auto& e : det.entries()) EXPECT_DOUBLE_EQ(hyb.get(e.node), e.score);
  }
}

TEST(ProbeDispatch, ZeroC0MatchesRandomizedDistribution) {
  const auto g = make_graph(3, {{2, 0}, {2, 1}});
  const std::vector<NodeId> uw = {0, 2};
  auto params = budget_params(0.1, 0.01, 0.6, 3);
  params.c0 = 0.0;
  Rng r1(31, StreamDomain::kUser, 1), r2(31, StreamDomain::kUser, 1);
  const int runs = 20000;
  int a = 0, b = 0;
  for (int i = 0; i < runs; ++i) {
    const auto d = probe_dispatch(g, uw, 1, params, r1);
    ASSERT_TRUE(d.empty() || (d.size() == 1 && d.get(1) == 1.0));
    a += d.empty() ? 0 : 1;
    b += randomized_probe(g, uw, 0.6, r2).empty() ? 0 : 1;
  }
  const double p = std::sqrt(0.6), sigma = std::sqrt(p * (1 - p) / runs);
  EXPECT_NEAR(static_cast<double>(a) / runs, p, 4 * sigma);
  EXPECT_NEAR(static_cast<double>(b) / runs, p, 4 * sigma);
}

TEST(ProbeDispatch, UnbiasedAfterSwitch) {
  const auto g = random_graph_min_in(20, 0.3, 19);
  std::vector<std::vector<NodeId>> prefixes;
  enumerate_prefixes(g, 4, prefixes);
  const auto& p = prefixes[prefixes.size() / 3];
  auto params = budget_params(0.1, 0.01, 0.6, g.num_nodes());
  params.eps_p = 0.0;
  params.c0 = 1.0;
  const auto exact = deterministic_probe(g, p, 0.6);
  const int reps = 10000;
  std::vector<double> sum(g.num_nodes(), 0.0);
  for (int r = 0; r < reps; ++r) {
    Rng rng(8, StreamDomain::kUser, static_cast<std::uint64_t>(r));
    const auto est = probe_dispatch(g, p, 1, params, rng);
    for (const auto& e : est.entries()) sum[e.node] += e.score;
  }
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const double q = exact.get(v);
    EXPECT_NEAR(sum[v] / reps, q, 4 * std::sqrt(q * (1 - q) / reps) + 1e-12) << v;
  }
}

}  // namespace
}  // namespace probesim
