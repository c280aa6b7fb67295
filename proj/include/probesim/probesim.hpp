#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "probesim/graph.hpp"
#include "probesim/probe.hpp"
#include "probesim/score_map.hpp"
#include "probesim/walk.hpp"

namespace probesim {

/// Ranked (node, estimate) pairs: scores nonincreasing, ties by ascending id.
using TopKResult = std::vector<ScoreEntry>;

/// Raw estimate of a single trial: the sum of probe scores over the walk's
/// prefixes of length 2..l. Uses `params.strategy` with weight 1.
ScoreMap trial_estimate(const DirectedGraph& g, std::span<const NodeId> walk,
                        const ProbeParams& params, Rng& rng);

/// Averages `sums` over `trials`, adds the eps_t / 2 truncation correction to
/// every nonzero entry when truncation is active, clamps to [0, 1].
ScoreMap finalize_estimates(std::vector<ScoreEntry> sums, std::uint64_t trials,
                            const ProbeParams& params);

/// Per-walk estimator over a fixed walk multiset. Walk k's probe randomness
/// comes from stream k of `seed`.
ScoreMap estimate_from_walks(const DirectedGraph& g, std::span<const SqrtCWalk> walks,
                             const ProbeParams& params, std::uint64_t seed, int threads = 1);

/// Batched estimator: one probe per tree path, weighted by path weight.
ScoreMap estimate_from_tree(const DirectedGraph& g, const ReverseReachabilityTree& tree,
                            const ProbeParams& params, std::uint64_t seed, int threads = 1);

/// Samples params.n_r truncated walks from `source` (walk k from stream k of
/// `seed`) and probes each prefix trial by trial.
ScoreMap probesim_basic(const DirectedGraph& g, NodeId source, const ProbeParams& params,
                        std::uint64_t seed, int threads = 1);

/// Same walks as probesim_basic, merged into a reverse reachability tree first.
ScoreMap probesim_batch(const DirectedGraph& g, NodeId source, const ProbeParams& params,
                        std::uint64_t seed, int threads = 1);

/// Routes to probesim_batch or probesim_basic per params.batch.
ScoreMap single_source(const DirectedGraph& g, NodeId source, const ProbeParams& params,
                       std::uint64_t seed, int threads = 1);

/// First k entries of `scores` by descending score (ascending id on ties),
/// padded with zero-score nodes in id order. Requires 1 <= k < n.
TopKResult rank_top_k(const ScoreMap& scores, std::size_t n, NodeId source, std::size_t k);

TopKResult top_k(const DirectedGraph& g, NodeId source, std::size_t k, const ProbeParams& params,
                 std::uint64_t seed, int threads = 1);

}  // namespace probesim
