#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "probesim/graph.hpp"
#include "probesim/rng.hpp"
#include "probesim/score_map.hpp"
#include "probesim/walk.hpp"

namespace probesim {

enum class ProbeStrategy { kDeterministic, kRandomized, kHybrid };

ProbeStrategy parse_strategy(std::string_view name);
std::string_view to_string(ProbeStrategy s) noexcept;

/// Error budget and execution knobs for one single-source query.
///
/// The budget satisfies eps + (1 + eps) / (1 - sqrt(c)) * eps_p + eps_t / 2 <= eps_a.
/// eps_t == 0 disables truncation (and its eps_t / 2 correction).
struct ProbeParams {
  double c = 0.6;
  double eps_a = 0.1;
  double eps = 0.05;
  double eps_t = 0.05;
  double eps_p = 0.0;
  double delta = 0.01;
  std::uint64_t n_r = 0;
  std::size_t ell_t = kUnbounded;
  double c0 = 1.0;
  ProbeStrategy strategy = ProbeStrategy::kHybrid;
  bool batch = true;
};

/// Default split eps = eps_t = eps_a / 2, eps_p = (1 - sqrt(c)) / (1 + eps) * eps_a / 4,
/// which makes the budget sum equal eps_a.
ProbeParams budget_params(double eps_a, double delta, double c, std::size_t n,
                          ProbeStrategy strategy = ProbeStrategy::kHybrid, bool batch = true);

/// Budget with caller-chosen eps_t and eps_p; eps is solved so the budget
/// sum equals eps_a. Throws ParameterError when nothing is left for eps.
ProbeParams budget_params_with(double eps_a, double delta, double c, std::size_t n, double eps_t,
                               double eps_p, ProbeStrategy strategy = ProbeStrategy::kHybrid,
                               bool batch = true);

/// Left-hand side of the budget inequality.
double budget_sum(const ProbeParams& p) noexcept;

/// n_r = ceil(3c / eps^2 * ln(n / delta)).
std::uint64_t trial_count(double c, double eps, double delta, std::size_t n);

/// Validates a prefix: at least two nodes, each step an in-edge.
void check_prefix(const DirectedGraph& g, std::span<const NodeId> prefix);

/// Reusable per-thread scratch for PROBE traversals. Not thread-safe; give each
/// worker its own.
class Prober {
 public:
  Prober(const DirectedGraph& g, double c);

  /// Deterministic PROBE on a validated prefix. Frontier entries with
  /// Score(x) * sqrt(c)^(i-j-1) <= eps_p are dropped before expansion. If the
  /// cumulative out-degree work exceeds `work_limit` after any level, the
  /// traversal is abandoned and false is returned with `out` untouched.
  /// Otherwise adds scale * Score(v) to `out` for every final-level node.
  bool deterministic(std::span<const NodeId> prefix, double eps_p, double work_limit,
                     SparseAccumulator& out, double scale);

  /// Randomized PROBE: adds `scale` to `out` for each selected node.
  void randomized(std::span<const NodeId> prefix, Rng& rng, SparseAccumulator& out, double scale);

  /// Probe with the configured strategy. `scale` multiplies the estimate of
  /// this prefix (weight / n_r in batch mode); a randomized fallback averages
  /// `weight` independent probes.
  void dispatch(std::span<const NodeId> prefix, std::uint64_t weight, const ProbeParams& params,
                Rng& rng, SparseAccumulator& out, double scale);

 private:
  const DirectedGraph& g_;
  double sqrt_c_;
  SparseAccumulator cur_;
  SparseAccumulator next_;
  std::vector<std::uint64_t> level_mark_;
  std::vector<std::uint64_t> seen_mark_;
  std::uint64_t stamp_ = 0;
  std::vector<NodeId> frontier_;
  std::vector<NodeId> frontier_next_;
  std::vector<NodeId> candidates_;
};

/// First-meeting scores of every node with respect to `prefix`.
ScoreMap deterministic_probe(const DirectedGraph& g, std::span<const NodeId> prefix, double c,
                             double eps_p = 0.0);

/// Sorted node ids selected by one randomized PROBE; each has implicit score 1.
std::vector<NodeId> randomized_probe(const DirectedGraph& g, std::span<const NodeId> prefix,
                                     double c, Rng& rng);

/// Hybrid dispatch for a prefix shared by `weight` walks; returns the
/// per-walk estimate (deterministic scores, or the average of `weight`
/// randomized probes after a switch).
ScoreMap probe_dispatch(const DirectedGraph& g, std::span<const NodeId> prefix,
                        std::uint64_t weight, const ProbeParams& params, Rng& rng);

}  // namespace probesim
