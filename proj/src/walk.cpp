#include "probesim/walk.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

namespace probesim {

void check_decay(double c) {
  if (!(c > 0.0 && c < 1.0)) throw ParameterError("decay factor c must be in (0, 1)");
}

void sample_walk_into(const DirectedGraph& g, NodeId source, double sqrt_c, std::size_t max_steps,
                      Rng& rng, std::vector<NodeId>& out) {
  out.clear();
  out.push_back(source);
  NodeId current = source;
  while (out.size() - 1 < max_steps) {
    const NodeId next = walk_step(g, current, sqrt_c, rng);
    if (next == kNoNode) break;
    out.push_back(next);
    current = next;
  }
}

SqrtCWalk sample_walk(const DirectedGraph& g, NodeId source, double c, std::size_t max_steps,
                      Rng& rng) {
  check_decay(c);
  (void)g.in_degree(source);
  SqrtCWalk walk;
  sample_walk_into(g, source, std::sqrt(c), max_steps, rng, walk.nodes);
  return walk;
}

std::size_t truncation_length(double eps_t, double c) {
  check_decay(c);
  if (!(eps_t > 0.0 && eps_t < 1.0)) throw ParameterError("eps_t must be in (0, 1)");
  const double steps = std::ceil(std::log(eps_t) / std::log(std::sqrt(c)));
  return std::max<std::size_t>(1, static_cast<std::size_t>(steps));
}

ReverseReachabilityTree::ReverseReachabilityTree(NodeId source) {
  nodes_.push_back({source, 0, 0, 0, {}});
}

void ReverseReachabilityTree::insert(std::span<const NodeId> walk) {
  if (walk.empty() || walk.front() != source()) {
    throw UsageError("walk does not start at the tree source " + std::to_string(source()));
  }
  ++nodes_.front().weight;
  Index cur = 0;
  for (std::size_t i = 1; i < walk.size(); ++i) {
    Index next = 0;
    for (Index child : nodes_[cur].children) {
      if (nodes_[child].node == walk[i]) {
        next = child;
        break;
      }
    }
    if (next == 0) {
      next = static_cast<Index>(nodes_.size());
      nodes_.push_back({walk[i], 0, cur, nodes_[cur].depth + 1, {}});
      nodes_[cur].children.push_back(next);
    }
    ++nodes_[next].weight;
    cur = next;
  }
}

std::vector<ReverseReachabilityTree::Index> ReverseReachabilityTree::bfs_order() const {
  std::vector<Index> order;
  order.reserve(nodes_.size());
  std::deque<Index> queue(nodes_.front().children.begin(), nodes_.front().children.end());
  while (!queue.empty()) {
    const Index i = queue.front();
    queue.pop_front();
    order.push_back(i);
    for (Index child : nodes_[i].children) queue.push_back(child);
  }
  return order;
}

void ReverseReachabilityTree::prefix_into(Index i, std::vector<NodeId>& out) const {
  out.resize(nodes_.at(i).depth + 1);
  for (Index cur = i;; cur = nodes_[cur].parent) {
    out[nodes_[cur].depth] = nodes_[cur].node;
    if (cur == 0) break;
  }
}

std::vector<ReverseReachabilityTree::Path> ReverseReachabilityTree::paths() const {
  std::vector<Path> out;
  for (Index i : bfs_order()) {
    Path p;
    prefix_into(i, p.prefix);
    p.weight = nodes_[i].weight;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace probesim
