#include <gtest/gtest.h>

#include <cmath>

#include "probesim/mc.hpp"
#include "test_util.hpp"

namespace probesim {
namespace {

using namespace testing;

TEST(McSingleSource, WalkCount) {
  EXPECT_EQ(mc_walk_count(0.02, 0.01, 8), static_cast<std::uint64_t>(std::ceil(std::log(800.0) / 0.0008)));
  EXPECT_THROW(mc_walk_count(0.0, 0.01, 8), ParameterError);
}

TEST(McSingleSource, Star) {
  const auto g = make_graph(3, {{2, 0}, {2, 1}});
  const auto s = mc_single_source(g, 0, 0.6, 0.02, 0.01, 4);
  EXPECT_NEAR(s.get(1), 0.6, 0.02);
  EXPECT_EQ(s.get(2), 0.0);
  EXPECT_FALSE(s.contains(0));
}

TEST(McSingleSource, IsolatedSource) {
  const auto g = make_graph(3, {{0, 1}, {0, 2}});
  EXPECT_TRUE(mc_single_source(g, 0, 0.6, 0.05, 0.01, 1).empty());
}

TEST(McSingleSource, Fixture) {
  const auto g = toy_graph();
  const auto s = mc_single_source(g, A, 0.25, 0.02, 0.01, 12);
  for (NodeId v = 1; v < 8; ++v) EXPECT_NEAR(s.get(v), kToyTruthA[v], 0.02) << v;
}

TEST(McSingleSource, ThreadInvariantAndCapped) {
  const auto g = random_graph(40, 0.1, 6);
  const auto a = mc_single_source(g, 1, 0.6, 0.05, 0.05, 9, 1);
  const auto b = mc_single_source(g, 1, 0.6, 0.05, 0.05, 9, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.entries()[i], b.entries()[i]);
  for (const auto& e : a.entries()) {
    EXPECT_GE(e.score, 0.0);
    EXPECT_LE(e.score, 1.0);
    EXPECT_GT(g.in_degree(e.node), 0u);
  }
  EXPECT_THROW(mc_single_source(g, 1, 0.6, 0.05, 0.05, 9, 1, 1000), CapExceeded);
}

}  // namespace
}  // namespace probesim
