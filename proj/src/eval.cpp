#include "probesim/eval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "probesim/exact.hpp"
#include "probesim/rng.hpp"

namespace probesim {

namespace {

double truth_of(std::span<const double> truth, NodeId v) {
  return v < truth.size() ? truth[v] : 0.0;
}

double gain(double s) { return std::exp2(s) - 1.0; }

void check_k(std::size_t k) {
  if (k < 1) throw ParameterError("k must be >= 1");
}

}  // namespace

void RankedList::validate() const {
  std::unordered_set<NodeId> seen;
  for (const auto& e : entries) {
    if (e.node == query) throw UsageError("ranked list contains its query node");
    if (!seen.insert(e.node).second) throw UsageError("ranked list has duplicate nodes");
  }
}

double abs_error(const ScoreMap& est, std::span<const double> truth, NodeId source) {
  double worst = 0.0;
  for (NodeId v = 0; v < truth.size(); ++v) {
    if (v == source) continue;
    worst = std::max(worst, std::abs(truth[v] - est.get(v)));
  }
  for (const auto& e : est.entries()) {
    if (e.node >= truth.size() && e.node != source) worst = std::max(worst, std::abs(e.score));
  }
  return worst;
}

double precision_at_k(const RankedList& result, const RankedList& truth, std::size_t k) {
  check_k(k);
  std::unordered_set<NodeId> expected;
  for (std::size_t i = 0; i < std::min(k, truth.size()); ++i) expected.insert(truth.entries[i].node);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(k, result.size()); ++i)
    hits += expected.count(result.entries[i].node);
  return static_cast<double>(hits) / static_cast<double>(k);
}

double ndcg_at_k(const RankedList& result, std::span<const double> truth_scores,
                 const RankedList& truth_topk, std::size_t k) {
  check_k(k);
  auto dcg = [&](const RankedList& list) {
    double sum = 0.0;
    for (std::size_t i = 0; i < std::min(k, list.size()); ++i) {
      sum += gain(truth_of(truth_scores, list.entries[i].node)) /
             std::log2(static_cast<double>(i) + 2.0);
    }
    return sum;
  };
  const double ideal = dcg(truth_topk);
  const double actual = dcg(result);
  if (ideal == 0.0) return actual == 0.0 ? 1.0 : 0.0;
  return actual / ideal;
}

double kendall_tau_k(const RankedList& result, std::span<const double> truth_scores,
                     std::size_t k) {
  if (k < 2) throw ParameterError("kendall tau needs k >= 2");
  const std::size_t m = std::min(k, result.size());
  if (m < 2) throw ParameterError("kendall tau needs at least 2 ranked entries");
  long long concordant = 0;
  long long discordant = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double si = truth_of(truth_scores, result.entries[i].node);
    for (std::size_t j = i + 1; j < m; ++j) {
      const double sj = truth_of(truth_scores, result.entries[j].node);
      if (si > sj) ++concordant;
      else if (si < sj) ++discordant;
    }
  }
  const double pairs = static_cast<double>(m) * static_cast<double>(m - 1) / 2.0;
  return static_cast<double>(concordant - discordant) / pairs;
}

RankedList truth_top_k(std::span<const double> truth_scores, NodeId query, std::size_t k) {
  RankedList out{query, {}};
  for (NodeId v = 0; v < truth_scores.size(); ++v)
    if (v != query) out.entries.push_back({v, truth_scores[v]});
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const ScoreEntry& a, const ScoreEntry& b) { return a.score > b.score; });
  if (out.entries.size() > k) out.entries.resize(k);
  return out;
}

MetricsReport evaluate(const ScoreMap& est, const RankedList& result,
                       std::span<const double> truth_scores, NodeId query, std::size_t k) {
  const RankedList ideal = truth_top_k(truth_scores, query, k);
  MetricsReport report;
  report.k = k;
  report.abs_error = abs_error(est, truth_scores, query);
  report.precision_at_k = precision_at_k(result, ideal, k);
  report.ndcg_at_k = ndcg_at_k(result, truth_scores, ideal, k);
  report.kendall_tau = k >= 2 && result.size() >= 2 ? kendall_tau_k(result, truth_scores, k) : 1.0;
  return report;
}

std::vector<NodeId> build_pool(std::span<const RankedList> lists, std::size_t k) {
  check_k(k);
  std::vector<NodeId> pool;
  for (const auto& list : lists)
    for (std::size_t i = 0; i < std::min(k, list.size()); ++i) pool.push_back(list.entries[i].node);
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  return pool;
}

RankedList pooled_ground_truth(NodeId query, std::span<const NodeId> pool, std::size_t k,
                               const Expert& expert) {
  check_k(k);
  if (pool.empty()) throw ParameterError("pool is empty");
  RankedList out{query, {}};
  for (NodeId v : pool)
    if (v != query) out.entries.push_back({v, expert(v)});
  std::sort(out.entries.begin(), out.entries.end(), [](const ScoreEntry& a, const ScoreEntry& b) {
    return a.score != b.score ? a.score > b.score : a.node < b.node;
  });
  if (out.entries.size() > k) out.entries.resize(k);
  return out;
}

RankedList pooled_ground_truth(const DirectedGraph& g, double c, NodeId query,
                               std::span<const NodeId> pool, double expert_eps,
                               double expert_delta, std::size_t k, std::uint64_t seed,
                               int threads) {
  check_k(k);
  if (pool.empty()) throw ParameterError("pool is empty");
  (void)mc_pair_count(expert_eps, expert_delta);
  std::vector<double> scores(pool.size(), 0.0);
  const auto count = static_cast<std::int64_t>(pool.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, threads))
  for (std::int64_t i = 0; i < count; ++i) {
    const NodeId v = pool[static_cast<std::size_t>(i)];
    if (v == query) continue;
    Rng rng(seed, StreamDomain::kExpert, v);
    scores[static_cast<std::size_t>(i)] = mc_single_pair(g, c, query, v, expert_eps, expert_delta, rng);
  }
  std::unordered_map<NodeId, double> by_node;
  for (std::size_t i = 0; i < pool.size(); ++i) by_node[pool[i]] = scores[i];
  return pooled_ground_truth(query, pool, k, [&](NodeId v) { return by_node.at(v); });
}

}  // namespace probesim
