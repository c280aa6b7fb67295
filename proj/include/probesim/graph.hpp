#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "probesim/types.hpp"

namespace probesim {

/// Bidirectional mapping between original labels and dense ids.
class IdMap {
 public:
  /// Returns the dense id for `label`, assigning the next id on first sight.
  NodeId intern(Label label);

  std::optional<NodeId> find(Label label) const;
  Label label(NodeId id) const { return labels_.at(id); }
  std::size_t size() const noexcept { return labels_.size(); }
  std::span<const Label> labels() const noexcept { return labels_; }

 private:
  std::vector<Label> labels_;
  std::unordered_map<Label, NodeId> ids_;
};

/// Immutable simple directed graph stored as two CSR arrays (out- and
/// in-neighbors). Neighbor lists are sorted by dense id.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  /// Builds from dense-id edges. Duplicates and self-loops are dropped.
  static DirectedGraph from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                                  IdMap ids = {});

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return out_targets_.size(); }

  std::span<const NodeId> out_neighbors(NodeId v) const {
    check(v);
    return {out_targets_.data() + out_index_[v], out_targets_.data() + out_index_[v + 1]};
  }
  std::span<const NodeId> in_neighbors(NodeId v) const {
    check(v);
    return {in_targets_.data() + in_index_[v], in_targets_.data() + in_index_[v + 1]};
  }
  std::size_t out_degree(NodeId v) const { return out_neighbors(v).size(); }
  std::size_t in_degree(NodeId v) const { return in_neighbors(v).size(); }

  bool has_edge(NodeId u, NodeId v) const;

  std::span<const std::size_t> out_index() const noexcept { return out_index_; }
  std::span<const NodeId> out_targets() const noexcept { return out_targets_; }
  std::span<const std::size_t> in_index() const noexcept { return in_index_; }
  std::span<const NodeId> in_targets() const noexcept { return in_targets_; }

  const IdMap& ids() const noexcept { return ids_; }
  Label label(NodeId v) const { return ids_.size() ? ids_.label(v) : Label{v}; }
  /// Dense id for an original label; throws std::out_of_range if unknown.
  NodeId node(Label label) const;

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.n_ == b.n_ && a.out_index_ == b.out_index_ && a.out_targets_ == b.out_targets_ &&
           a.in_index_ == b.in_index_ && a.in_targets_ == b.in_targets_;
  }

 private:
  void check(NodeId v) const;

  std::size_t n_ = 0;
  std::vector<std::size_t> out_index_{0};
  std::vector<NodeId> out_targets_;
  std::vector<std::size_t> in_index_{0};
  std::vector<NodeId> in_targets_;
  IdMap ids_;
};

/// Parses "u<TAB>v" lines ('#' comments, LF or CRLF). Labels are interned in
/// first-appearance order unless `seed_ids` pre-assigns them (the ingest
/// sidecar), in which case seeded labels keep their ids.
DirectedGraph load_edge_list(std::istream& in, const IdMap* seed_ids = nullptr);
DirectedGraph load_edge_list_file(const std::string& path, const IdMap* seed_ids = nullptr);

/// Writes the canonical form: one "label<TAB>label" per edge, sorted by
/// (source id, target id). Isolated nodes are written as self-loop lines so
/// they survive a reload.
void write_edge_list(std::ostream& out, const DirectedGraph& g);

/// Writes the "label<TAB>dense_id" sidecar.
void write_id_map(std::ostream& out, const DirectedGraph& g);
IdMap read_id_map(std::istream& in);

}  // namespace probesim
