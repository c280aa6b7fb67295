#include "probesim/probesim.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace probesim {

namespace {

constexpr std::size_t kTrialBlock = 256;
constexpr std::size_t kPathBlock = 64;
constexpr std::size_t kWalkChunk = std::size_t{1} << 16;

int worker_index() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

struct Worker {
  Worker(const DirectedGraph& g, double c) : prober(g, c), acc(g.num_nodes()) {}

  Prober prober;
  SparseAccumulator acc;
  std::vector<NodeId> walk;
};

/// Runs `fn(worker, block)` for every block and sums the per-block results
/// into `total` in block order, so the result does not depend on `threads`.
template <class BlockFn>
void run_blocks(const DirectedGraph& g, double c, std::size_t blocks, int threads, BlockFn fn,
                SparseAccumulator& total) {
  threads = std::max(1, threads);
  std::vector<std::unique_ptr<Worker>> workers;
  for (int t = 0; t < threads; ++t) workers.push_back(std::make_unique<Worker>(g, c));

  const std::size_t wave = static_cast<std::size_t>(threads) * 8;
  std::vector<std::vector<ScoreEntry>> parts;
  for (std::size_t start = 0; start < blocks; start += wave) {
    const std::size_t end = std::min(blocks, start + wave);
    parts.assign(end - start, {});
    const auto first = static_cast<std::int64_t>(start);
    const auto last = static_cast<std::int64_t>(end);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::int64_t b = first; b < last; ++b) {
      Worker& w = *workers[static_cast<std::size_t>(worker_index())];
      fn(w, static_cast<std::size_t>(b));
      parts[static_cast<std::size_t>(b) - start] = w.acc.drain();
    }
    for (const auto& part : parts)
      for (const auto& e : part) total.add(e.node, e.score);
  }
}

void probe_walk(Worker& w, std::span<const NodeId> walk, const ProbeParams& params, Rng& rng) {
  for (std::size_t i = 2; i <= walk.size(); ++i) {
    w.prober.dispatch(walk.first(i), 1, params, rng, w.acc, 1.0);
  }
}

void check_query(const DirectedGraph& g, NodeId source, const ProbeParams& params) {
  check_decay(params.c);
  (void)g.in_degree(source);
  if (params.n_r == 0) throw ParameterError("trial count n_r must be >= 1");
  if (params.eps_p < 0.0) throw ParameterError("eps_p must be >= 0");
  if (params.eps_t < 0.0) throw ParameterError("eps_t must be >= 0");
  if (params.c0 < 0.0) throw ParameterError("c0 must be >= 0");
  if (params.ell_t == 0) throw ParameterError("ell_t must be >= 1");
}

}  // namespace

ScoreMap trial_estimate(const DirectedGraph& g, std::span<const NodeId> walk,
                        const ProbeParams& params, Rng& rng) {
  check_decay(params.c);
  if (walk.empty()) throw UsageError("empty walk");
  if (walk.size() >= 2) check_prefix(g, walk);
  Worker w(g, params.c);
  probe_walk(w, walk, params, rng);
  return ScoreMap(w.acc.drain());
}

ScoreMap finalize_estimates(std::vector<ScoreEntry> sums, std::uint64_t trials,
                            const ProbeParams& params) {
  const bool truncated = params.eps_t > 0.0 && params.ell_t != kUnbounded;
  const double correction = truncated ? params.eps_t / 2.0 : 0.0;
  std::vector<ScoreEntry> out;
  out.reserve(sums.size());
  for (auto e : sums) {
    if (e.score <= 0.0) continue;
    e.score = std::clamp(e.score / static_cast<double>(trials) + correction, 0.0, 1.0);
    out.push_back(e);
  }
  return ScoreMap(std::move(out));
}

ScoreMap estimate_from_walks(const DirectedGraph& g, std::span<const SqrtCWalk> walks,
                             const ProbeParams& params, std::uint64_t seed, int threads) {
  if (walks.empty()) throw ParameterError("no walks");
  const NodeId source = walks.front().nodes.at(0);
  check_query(g, source, params);
  for (const auto& walk : walks) {
    if (walk.nodes.empty() || walk.nodes.front() != source) {
      throw UsageError("all walks must start at the same source");
    }
    if (walk.length() >= 2) check_prefix(g, walk.nodes);
  }
  SparseAccumulator total(g.num_nodes());
  const std::size_t blocks = (walks.size() + kTrialBlock - 1) / kTrialBlock;
  run_blocks(
      g, params.c, blocks, threads,
      [&](Worker& w, std::size_t b) {
        const std::size_t end = std::min(walks.size(), (b + 1) * kTrialBlock);
        for (std::size_t k = b * kTrialBlock; k < end; ++k) {
          Rng rng(seed, StreamDomain::kTrial, k);
          probe_walk(w, walks[k].nodes, params, rng);
        }
      },
      total);
  return finalize_estimates(total.drain(), walks.size(), params);
}

ScoreMap estimate_from_tree(const DirectedGraph& g, const ReverseReachabilityTree& tree,
                            const ProbeParams& params, std::uint64_t seed, int threads) {
  check_query(g, tree.source(), params);
  if (tree.walk_count() == 0) throw ParameterError("tree holds no walks");
  const auto order = tree.bfs_order();
  SparseAccumulator total(g.num_nodes());
  const std::size_t blocks = (order.size() + kPathBlock - 1) / kPathBlock;
  run_blocks(
      g, params.c, blocks, threads,
      [&](Worker& w, std::size_t b) {
        const std::size_t end = std::min(order.size(), (b + 1) * kPathBlock);
        for (std::size_t q = b * kPathBlock; q < end; ++q) {
          const auto& node = tree.node(order[q]);
          tree.prefix_into(order[q], w.walk);
          Rng rng(seed, StreamDomain::kTreeProbe, q);
          w.prober.dispatch(w.walk, node.weight, params, rng, w.acc,
                            static_cast<double>(node.weight));
        }
      },
      total);
  return finalize_estimates(total.drain(), tree.walk_count(), params);
}

ScoreMap probesim_basic(const DirectedGraph& g, NodeId source, const ProbeParams& params,
                        std::uint64_t seed, int threads) {
  check_query(g, source, params);
  const double sqrt_c = std::sqrt(params.c);
  SparseAccumulator total(g.num_nodes());
  const std::size_t blocks = (params.n_r + kTrialBlock - 1) / kTrialBlock;
  run_blocks(
      g, params.c, blocks, threads,
      [&](Worker& w, std::size_t b) {
        const std::size_t end = std::min<std::size_t>(params.n_r, (b + 1) * kTrialBlock);
        std::vector<NodeId> walk;
        for (std::size_t k = b * kTrialBlock; k < end; ++k) {
          Rng rng(seed, StreamDomain::kTrial, k);
          sample_walk_into(g, source, sqrt_c, params.ell_t, rng, walk);
          probe_walk(w, walk, params, rng);
        }
      },
      total);
  return finalize_estimates(total.drain(), params.n_r, params);
}

ScoreMap probesim_batch(const DirectedGraph& g, NodeId source, const ProbeParams& params,
                        std::uint64_t seed, int threads) {
  check_query(g, source, params);
  const double sqrt_c = std::sqrt(params.c);
  threads = std::max(1, threads);
  ReverseReachabilityTree tree(source);
  std::vector<std::vector<NodeId>> chunk;
  for (std::uint64_t start = 0; start < params.n_r; start += kWalkChunk) {
    const std::uint64_t end = std::min<std::uint64_t>(params.n_r, start + kWalkChunk);
    chunk.resize(end - start);
    const auto first = static_cast<std::int64_t>(start);
    const auto last = static_cast<std::int64_t>(end);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::int64_t k = first; k < last; ++k) {
      Rng rng(seed, StreamDomain::kTrial, static_cast<std::uint64_t>(k));
      sample_walk_into(g, source, sqrt_c, params.ell_t, rng,
                       chunk[static_cast<std::size_t>(k - first)]);
    }
    for (const auto& walk : chunk) tree.insert(walk);
  }
  return estimate_from_tree(g, tree, params, seed, threads);
}

ScoreMap single_source(const DirectedGraph& g, NodeId source, const ProbeParams& params,
                       std::uint64_t seed, int threads) {
  return params.batch ? probesim_batch(g, source, params, seed, threads)
                      : probesim_basic(g, source, params, seed, threads);
}

TopKResult rank_top_k(const ScoreMap& scores, std::size_t n, NodeId source, std::size_t k) {
  if (k < 1 || k >= n) throw ParameterError("k must satisfy 1 <= k < n");
  TopKResult out;
  for (const auto& e : scores.ranked()) {
    if (out.size() == k) break;
    if (e.node != source) out.push_back(e);
  }
  for (NodeId v = 0; out.size() < k && v < n; ++v) {
    if (v == source || scores.get(v) != 0.0) continue;
    out.push_back({v, 0.0});
  }
  return out;
}

TopKResult top_k(const DirectedGraph& g, NodeId source, std::size_t k, const ProbeParams& params,
                 std::uint64_t seed, int threads) {
  if (k < 1 || k >= g.num_nodes()) throw ParameterError("k must satisfy 1 <= k < n");
  return rank_top_k(single_source(g, source, params, seed, threads), g.num_nodes(), source, k);
}

}  // namespace probesim
