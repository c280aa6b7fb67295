#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "probesim/graph.hpp"
#include "probesim/score_map.hpp"

namespace probesim {

/// A ranked answer list for one query (best first).
struct RankedList {
  NodeId query = kNoNode;
  std::vector<ScoreEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  /// Throws UsageError on duplicate nodes or when the query node is listed.
  void validate() const;
};

struct MetricsReport {
  double abs_error = 0.0;
  double precision_at_k = 0.0;
  double ndcg_at_k = 0.0;
  double kendall_tau = 0.0;
  std::size_t k = 0;
};

/// max over v != source of |truth[v] - est(v)|; absent estimates count as 0.
double abs_error(const ScoreMap& est, std::span<const double> truth, NodeId source);

/// |top-k(result) n top-k(truth)| / k.
double precision_at_k(const RankedList& result, const RankedList& truth, std::size_t k);

/// NDCG@k with gain 2^s - 1 and log2(i + 1) discount, using true scores of
/// the returned nodes. The ideal DCG comes from `truth_topk`.
double ndcg_at_k(const RankedList& result, std::span<const double> truth_scores,
                 const RankedList& truth_topk, std::size_t k);

/// Kendall tau difference over the result's first k entries judged by true
/// scores. Ties in the true scores count as neither concordant nor discordant.
double kendall_tau_k(const RankedList& result, std::span<const double> truth_scores,
                     std::size_t k);

/// Ideal ranking from a truth row: query excluded, descending score,
/// ascending id on ties.
RankedList truth_top_k(std::span<const double> truth_scores, NodeId query, std::size_t k);

/// All four metrics for one query.
MetricsReport evaluate(const ScoreMap& est, const RankedList& result,
                       std::span<const double> truth_scores, NodeId query, std::size_t k);

/// Union of the top-k nodes of every list, deduplicated, ascending id.
std::vector<NodeId> build_pool(std::span<const RankedList> lists, std::size_t k);

using Expert = std::function<double(NodeId)>;

/// The k pool nodes with the highest expert scores (ascending id on ties).
RankedList pooled_ground_truth(NodeId query, std::span<const NodeId> pool, std::size_t k,
                               const Expert& expert);

inline constexpr double kExpertEps = 0.001;
inline constexpr double kExpertDelta = 1e-4;

/// Pooling with the single-pair Monte Carlo expert; node v uses its own
/// random stream so the ranking is independent of `threads`.
RankedList pooled_ground_truth(const DirectedGraph& g, double c, NodeId query,
                               std::span<const NodeId> pool, double expert_eps,
                               double expert_delta, std::size_t k, std::uint64_t seed,
                               int threads = 1);

}  // namespace probesim
