#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "probesim/graph.hpp"
#include "probesim/rng.hpp"

namespace probesim {

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

/// A reverse random walk (u_1, ..., u_l) with u_1 the source and each
/// u_{j+1} an in-neighbor of u_j.
struct SqrtCWalk {
  std::vector<NodeId> nodes;

  std::size_t length() const noexcept { return nodes.size(); }
  std::span<const NodeId> prefix(std::size_t i) const { return std::span(nodes).first(i); }
};

void check_decay(double c);

/// One step of a sqrt(c)-walk from `current`: stop with probability
/// 1 - sqrt(c) (drawn first), stop at a dead end, else a uniform in-neighbor.
/// Returns kNoNode on stop.
inline NodeId walk_step(const DirectedGraph& g, NodeId current, double sqrt_c, Rng& rng) {
  if (rng.uniform() >= sqrt_c) return kNoNode;
  auto in = g.in_neighbors(current);
  if (in.empty()) return kNoNode;
  return in[rng.below(in.size())];
}

/// Samples a walk from `source` with at most `max_steps` steps (edges).
SqrtCWalk sample_walk(const DirectedGraph& g, NodeId source, double c, std::size_t max_steps,
                      Rng& rng);

/// Allocation-free variant; overwrites `out`.
void sample_walk_into(const DirectedGraph& g, NodeId source, double sqrt_c, std::size_t max_steps,
                      Rng& rng, std::vector<NodeId>& out);

/// Smallest step count l_t with sqrt(c)^l_t <= eps_t, i.e.
/// ceil(log(eps_t) / log(sqrt(c))).
std::size_t truncation_length(double eps_t, double c);

/// Prefix tree over many walks from one source; each tree node counts the
/// walks that share the root-to-node prefix.
class ReverseReachabilityTree {
 public:
  using Index = std::uint32_t;

  struct Node {
    NodeId node;
    std::uint64_t weight;
    Index parent;
    std::uint32_t depth;
    std::vector<Index> children;
  };

  struct Path {
    std::vector<NodeId> prefix;
    std::uint64_t weight;

    friend bool operator==(const Path&, const Path&) = default;
  };

  explicit ReverseReachabilityTree(NodeId source);

  /// Adds one walk; throws UsageError if it does not start at the root node.
  void insert(std::span<const NodeId> walk);

  NodeId source() const noexcept { return nodes_.front().node; }
  const Node& root() const noexcept { return nodes_.front(); }
  const Node& node(Index i) const { return nodes_.at(i); }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::uint64_t walk_count() const noexcept { return nodes_.front().weight; }

  /// Non-root tree nodes in breadth-first order (children in insertion order).
  std::vector<Index> bfs_order() const;

  /// Writes the root-to-node path of tree node `i` into `out`.
  void prefix_into(Index i, std::vector<NodeId>& out) const;

  /// Every root-to-node path except the root alone, breadth-first.
  std::vector<Path> paths() const;

 private:
  std::vector<Node> nodes_;
};

}  // namespace probesim
