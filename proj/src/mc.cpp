#include "probesim/mc.hpp"

#include <algorithm>
#include <cmath>

#include "probesim/rng.hpp"
#include "probesim/walk.hpp"

namespace probesim {

std::uint64_t mc_walk_count(double eps, double delta, std::size_t n) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must be in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must be in (0, 1)");
  if (n == 0) throw ParameterError("graph has no nodes");
  return static_cast<std::uint64_t>(
      std::ceil(std::log(static_cast<double>(n) / delta) / (2.0 * eps * eps)));
}

ScoreMap mc_single_source(const DirectedGraph& g, NodeId source, double c, double eps,
                          double delta, std::uint64_t seed, int threads, std::uint64_t work_cap) {
  check_decay(c);
  (void)g.in_degree(source);
  const std::size_t n = g.num_nodes();
  const std::uint64_t r = mc_walk_count(eps, delta, n);
  if (static_cast<double>(r) * static_cast<double>(n) > static_cast<double>(work_cap)) {
    throw CapExceeded("Monte Carlo baseline needs " + std::to_string(r) + " walks for each of " +
                      std::to_string(n) + " nodes, over the work cap");
  }
  const double sqrt_c = std::sqrt(c);

  // Walks from the source are flattened: walk i occupies [offset[i], offset[i+1]).
  std::vector<std::size_t> offset{0};
  std::vector<NodeId> flat;
  {
    Rng rng(seed, StreamDomain::kMonteCarlo, source);
    std::vector<NodeId> walk;
    for (std::uint64_t i = 0; i < r; ++i) {
      sample_walk_into(g, source, sqrt_c, kUnbounded, rng, walk);
      flat.insert(flat.end(), walk.begin(), walk.end());
      offset.push_back(flat.size());
    }
  }

  std::vector<double> estimate(n, 0.0);
  const auto nodes = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(std::max(1, threads))
  for (std::int64_t vi = 0; vi < nodes; ++vi) {
    const auto v = static_cast<NodeId>(vi);
    if (v == source || g.in_degree(v) == 0) continue;
    // Streams are per target node, so the estimate does not depend on scheduling.
    Rng rng(seed, StreamDomain::kMonteCarlo, v);
    std::uint64_t meets = 0;
    for (std::uint64_t i = 0; i < r; ++i) {
      const std::size_t begin = offset[i];
      const std::size_t len = offset[i + 1] - begin;
      NodeId cur = v;
      for (std::size_t pos = 1;; ++pos) {
        cur = walk_step(g, cur, sqrt_c, rng);
        if (cur == kNoNode || pos >= len) break;
        if (flat[begin + pos] == cur) {
          ++meets;
          break;
        }
      }
    }
    estimate[v] = static_cast<double>(meets) / static_cast<double>(r);
  }

  std::vector<ScoreEntry> out;
  for (NodeId v = 0; v < n; ++v)
    if (estimate[v] > 0.0) out.push_back({v, estimate[v]});
  return ScoreMap(std::move(out));
}

}  // namespace probesim
