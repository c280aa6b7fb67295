#pragma once

#include <cstdint>

#include "probesim/graph.hpp"
#include "probesim/score_map.hpp"

namespace probesim {

inline constexpr std::uint64_t kDefaultMcWorkCap = 20'000'000'000ULL;

/// Walks per node for the single-source baseline: ceil(ln(n / delta) / (2 eps^2)).
std::uint64_t mc_walk_count(double eps, double delta, std::size_t n);

/// Index-free Monte Carlo single-source SimRank. Walk i from `source` is
/// paired with walk i from every other node v; the estimate for v is the
/// fraction of pairs that meet. Throws CapExceeded when walks * n exceeds
/// `work_cap`.
ScoreMap mc_single_source(const DirectedGraph& g, NodeId source, double c, double eps,
                          double delta, std::uint64_t seed, int threads = 1,
                          std::uint64_t work_cap = kDefaultMcWorkCap);

}  // namespace probesim
