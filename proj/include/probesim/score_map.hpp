#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "probesim/types.hpp"

namespace probesim {

struct ScoreEntry {
  NodeId node;
  double score;

  friend bool operator==(const ScoreEntry&, const ScoreEntry&) = default;
};

/// Sparse node -> score association, sorted by node id. Absent nodes score 0.
class ScoreMap {
 public:
  ScoreMap() = default;

  /// Entries must have distinct nodes; they are sorted here.
  explicit ScoreMap(std::vector<ScoreEntry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const ScoreEntry& a, const ScoreEntry& b) { return a.node < b.node; });
  }

  double get(NodeId v) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const ScoreEntry& e, NodeId id) { return e.node < id; });
    return (it != entries_.end() && it->node == v) ? it->score : 0.0;
  }
  bool contains(NodeId v) const noexcept {
    return std::binary_search(entries_.begin(), entries_.end(), ScoreEntry{v, 0.0},
                              [](const ScoreEntry& a, const ScoreEntry& b) { return a.node < b.node; });
  }

  std::span<const ScoreEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Nonzero entries ordered by descending score, ascending id on ties.
  std::vector<ScoreEntry> ranked() const {
    std::vector<ScoreEntry> out;
    for (const auto& e : entries_)
      if (e.score != 0.0) out.push_back(e);
    std::stable_sort(out.begin(), out.end(), [](const ScoreEntry& a, const ScoreEntry& b) {
      return a.score > b.score;
    });
    return out;
  }

 private:
  std::vector<ScoreEntry> entries_;
};

/// Dense scratch vector that remembers which slots were touched, so it can be
/// drained into a ScoreMap and reset in time proportional to the touched set.
class SparseAccumulator {
 public:
  SparseAccumulator() = default;
  explicit SparseAccumulator(std::size_t n) : values_(n, 0.0), seen_(n, 0) {}

  void resize(std::size_t n) {
    values_.assign(n, 0.0);
    seen_.assign(n, 0);
    touched_.clear();
  }

  void add(NodeId v, double x) {
    if (!seen_[v]) {
      seen_[v] = 1;
      touched_.push_back(v);
    }
    values_[v] += x;
  }

  double operator[](NodeId v) const noexcept { return values_[v]; }
  std::span<const NodeId> touched() const noexcept { return touched_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Touched (node, value) pairs sorted by node; clears the accumulator.
  std::vector<ScoreEntry> drain() {
    std::sort(touched_.begin(), touched_.end());
    std::vector<ScoreEntry> out;
    out.reserve(touched_.size());
    for (NodeId v : touched_) {
      out.push_back({v, values_[v]});
      values_[v] = 0.0;
      seen_[v] = 0;
    }
    touched_.clear();
    return out;
  }

  void clear() {
    for (NodeId v : touched_) {
      values_[v] = 0.0;
      seen_[v] = 0;
    }
    touched_.clear();
  }

 private:
  std::vector<double> values_;
  std::vector<unsigned char> seen_;
  std::vector<NodeId> touched_;
};

}  // namespace probesim
