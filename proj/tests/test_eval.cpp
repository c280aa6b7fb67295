#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "probesim/eval.hpp"
#include "probesim/exact.hpp"
#include "test_util.hpp"

namespace probesim {
namespace {

using namespace testing;

const std::vector<double> kTruth(kToyTruthA.begin(), kToyTruthA.end());

RankedList list(NodeId query, std::vector<NodeId> nodes) {
  RankedList r{query, {}};
  for (NodeId v : nodes) r.entries.push_back({v, 0.0});
  return r;
}

TEST(AbsError, Examples) {
  ScoreMap exact;
  {
    std::vector<ScoreEntry> e;
    for (NodeId v = 1; v < 8; ++v) e.push_back({v, kTruth[v]});
    exact = ScoreMap(e);
  }
  EXPECT_EQ(abs_error(exact, kTruth, A), 0.0);
  EXPECT_DOUBLE_EQ(abs_error(ScoreMap{}, kTruth, A), 0.131);
  auto bumped = kTruth;
  bumped[F] += 0.05;
  EXPECT_NEAR(abs_error(exact, bumped, A), 0.05, 1e-15);
}

TEST(Precision, Examples) {
  const auto truth = list(A, {D, E, G, H});
  EXPECT_EQ(precision_at_k(truth, truth, 4), 1.0);
  EXPECT_EQ(precision_at_k(list(A, {B, C, F}), list(A, {D, E, G}), 3), 0.0);
  // Overlap {d, e, g} of 4.
  const auto result = list(A, {G, C, E, D});
  EXPECT_EQ(precision_at_k(result, truth, 4), 3.0 / 4.0);
  EXPECT_EQ(precision_at_k(truth, result, 4), precision_at_k(result, truth, 4));
}

TEST(Ndcg, Examples) {
  const auto ideal = truth_top_k(kTruth, A, 4);
  EXPECT_NEAR(ndcg_at_k(ideal, kTruth, ideal, 4), 1.0, 1e-15);

  const std::vector<double> flat = {1.0, 0.2, 0.2, 0.2, 0.2};
  const auto ideal_flat = truth_top_k(flat, 0, 3);
  EXPECT_NEAR(ndcg_at_k(list(0, {4, 3, 2}), flat, ideal_flat, 3), 1.0, 1e-15);

  const double g1 = std::pow(2.0, 0.131) - 1, g2 = std::pow(2.0, 0.070) - 1;
  const double expected = (g2 / 1.0 + g1 / (std::log(3.0) / std::log(2.0))) /
                          (g1 / 1.0 + g2 / (std::log(3.0) / std::log(2.0)));
  const auto swapped = list(A, {E, D});
  EXPECT_NEAR(ndcg_at_k(swapped, kTruth, truth_top_k(kTruth, A, 2), 2), expected, 1e-12);

  const std::vector<double> zeros(5, 0.0);
  EXPECT_EQ(ndcg_at_k(list(0, {1, 2}), zeros, truth_top_k(zeros, 0, 2), 2), 1.0);
}

// Independent pair count for Kendall tau over the first k entries.
double tau_oracle(const std::vector<double>& s, std::size_t k) {
  long c = 0, d = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const double diff = s[i] - s[j];
      c += diff > 0;
      d += diff < 0;
    }
  return static_cast<double>(c - d) / (static_cast<double>(k * (k - 1)) / 2.0);
}

TEST(KendallTau, Examples) {
  EXPECT_EQ(kendall_tau_k(list(A, {D, E, G, C, F, B}), kTruth, 6), 1.0);
  EXPECT_EQ(kendall_tau_k(list(A, {B, F, C, E, D}), kTruth, 5), -1.0);
  // g and h tie: the pair counts as neither.
  const auto tied = list(A, {G, D, H});
  const std::vector<double> s = {kTruth[G], kTruth[D], kTruth[H]};
  EXPECT_NEAR(kendall_tau_k(tied, kTruth, 3), tau_oracle(s, 3), 1e-12);
  EXPECT_NEAR(kendall_tau_k(tied, kTruth, 3), (1.0 - 1.0) / 3.0, 1e-12);
  EXPECT_THROW(kendall_tau_k(tied, kTruth, 1), ParameterError);
}

TEST(KendallTau, RandomAgainstOracle) {
  Rng rng(4);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> truth(12);
    for (auto& x : truth) x = static_cast<double>(rng.below(5)) / 4.0;
    std::vector<NodeId> order(12);
    for (NodeId i = 0; i < 12; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t k = 2 + rng.below(10);
    std::vector<double> s;
    for (NodeId v : order) s.push_back(truth[v]);
    EXPECT_NEAR(kendall_tau_k(list(kNoNode, order), truth, k), tau_oracle(s, k), 1e-12);
  }
}

TEST(RankedList, Validate) {
  EXPECT_NO_THROW(list(A, {B, C}).validate());
  EXPECT_THROW(list(A, {B, A}).validate(), UsageError);
  EXPECT_THROW(list(A, {B, B}).validate(), UsageError);
}

TEST(Pooling, Examples) {
  const std::vector<RankedList> single = {list(A, {D, E, G, C})};
  const auto pool = build_pool(single, 3);
  EXPECT_EQ(pool, (std::vector<NodeId>{D, E, G}));
  const auto gt = pooled_ground_truth(A, pool, 3, [](NodeId v) { return kTruth[v]; });
  EXPECT_EQ(gt.entries.size(), 3u);
  EXPECT_EQ(gt.entries[0].node, D);
  EXPECT_EQ(gt.entries[1].node, E);
  EXPECT_EQ(gt.entries[2].node, G);

  const std::vector<RankedList> disjoint = {list(0, {1, 2, 3}), list(0, {4, 5, 6})};
  EXPECT_EQ(build_pool(disjoint, 3).size(), 6u);
}

TEST(Pooling, FixtureWithMonteCarloExpert) {
  const auto g = toy_graph();
  const std::vector<NodeId> pool = {B, C, D, E, F, G, H};
  const auto gt = pooled_ground_truth(g, 0.25, A, pool, 0.005, kExpertDelta, 7, 3);
  ASSERT_EQ(gt.entries.size(), 7u);
  std::vector<NodeId> order;
  for (const auto& e : gt.entries) order.push_back(e.node);
  EXPECT_EQ(order[0], D);
  EXPECT_EQ(order[1], E);
  EXPECT_TRUE((order[2] == G && order[3] == H) || (order[2] == H && order[3] == G));
  EXPECT_EQ(order[4], C);
  EXPECT_EQ(order[5], F);
  EXPECT_EQ(order[6], B);
}

TEST(Evaluate, PerfectResult) {
  std::vector<ScoreEntry> e;
  for (NodeId v = 1; v < 8; ++v) e.push_back({v, kTruth[v]});
  const auto ideal = truth_top_k(kTruth, A, 3);
  const auto r = evaluate(ScoreMap(e), ideal, kTruth, A, 3);
  EXPECT_EQ(r.abs_error, 0.0);
  EXPECT_EQ(r.precision_at_k, 1.0);
  EXPECT_NEAR(r.ndcg_at_k, 1.0, 1e-15);
  EXPECT_EQ(r.kendall_tau, 1.0);
  EXPECT_EQ(r.k, 3u);
}

}  // namespace
}  // namespace probesim
