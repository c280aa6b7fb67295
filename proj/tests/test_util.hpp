#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "probesim/graph.hpp"
#include "probesim/rng.hpp"

namespace probesim::testing {

// Toy fixture node ids.
enum : NodeId { A = 0, B, C, D, E, F, G, H };

// s(a, .) at c = 0.25, one entry per node a..h.
inline constexpr std::array<double, 8> kToyTruthA = {1.0,   0.0096, 0.049, 0.131,
                                                    0.070, 0.041,  0.051, 0.051};

inline std::string data_path(const std::string& name) {
  return std::string(PROBESIM_TEST_DATA_DIR) + "/" + name;
}

inline DirectedGraph toy_graph() { return load_edge_list_file(data_path("toy.tsv")); }

inline DirectedGraph make_graph(std::size_t n, std::vector<std::pair<NodeId, NodeId>> edges) {
  return DirectedGraph::from_edges(n, edges, IdMap{});
}

// Erdos-Renyi style directed graph without self-loops.
inline DirectedGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed, StreamDomain::kUser, n);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (u != v && rng.uniform() < p) edges.emplace_back(u, v);
  return make_graph(n, std::move(edges));
}

// Random graph where every node has at least one in-neighbor.
inline DirectedGraph random_graph_min_in(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed, StreamDomain::kUser, n + 1000);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 0; v < n; ++v) {
    edges.emplace_back(static_cast<NodeId>((v + 1) % n), v);
    for (NodeId u = 0; u < n; ++u)
      if (u != v && rng.uniform() < p) edges.emplace_back(u, v);
  }
  return make_graph(n, std::move(edges));
}

// Every valid reverse path of `len` nodes starting anywhere.
inline void enumerate_prefixes(const DirectedGraph& g, std::size_t len,
                               std::vector<std::vector<NodeId>>& out) {
  std::vector<std::vector<NodeId>> layer;
  for (NodeId v = 0; v < g.num_nodes(); ++v) layer.push_back({v});
  for (std::size_t step = 1; step < len; ++step) {
    std::vector<std::vector<NodeId>> next;
    for (const auto& p : layer)
      for (NodeId x : g.in_neighbors(p.back())) {
        next.push_back(p);
        next.back().push_back(x);
      }
    layer = std::move(next);
  }
  out.insert(out.end(), layer.begin(), layer.end());
}

}  // namespace probesim::testing
