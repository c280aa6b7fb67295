#include "probesim/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace probesim {

NodeId IdMap::intern(Label label) {
  auto [it, inserted] = ids_.try_emplace(label, static_cast<NodeId>(labels_.size()));
  if (inserted) {
    if (labels_.size() >= kNoNode) throw CapExceeded("too many nodes for 32-bit ids");
    labels_.push_back(label);
  }
  return it->second;
}

std::optional<NodeId> IdMap::find(Label label) const {
  auto it = ids_.find(label);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

namespace {

void build_csr(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges, bool by_source,
               std::vector<std::size_t>& index, std::vector<NodeId>& targets) {
  index.assign(n + 1, 0);
  for (const auto& [u, v] : edges) ++index[(by_source ? u : v) + 1];
  for (std::size_t i = 0; i < n; ++i) index[i + 1] += index[i];
  targets.resize(edges.size());
  std::vector<std::size_t> cursor(index.begin(), index.end() - 1);
  for (const auto& [u, v] : edges) {
    const NodeId key = by_source ? u : v;
    targets[cursor[key]++] = by_source ? v : u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(targets.begin() + static_cast<std::ptrdiff_t>(index[i]),
              targets.begin() + static_cast<std::ptrdiff_t>(index[i + 1]));
  }
}

}  // namespace

DirectedGraph DirectedGraph::from_edges(std::size_t n,
                                        std::span<const std::pair<NodeId, NodeId>> edges,
                                        IdMap ids) {
  std::vector<std::pair<NodeId, NodeId>> clean;
  clean.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.first >= n || e.second >= n) throw std::out_of_range("edge endpoint out of range");
    if (e.first != e.second) clean.push_back(e);
  }
  std::sort(clean.begin(), clean.end());
  clean.erase(std::unique(clean.begin(), clean.end()), clean.end());

  DirectedGraph g;
  g.n_ = n;
  build_csr(n, clean, true, g.out_index_, g.out_targets_);
  build_csr(n, clean, false, g.in_index_, g.in_targets_);
  g.ids_ = std::move(ids);
  return g;
}

void DirectedGraph::check(NodeId v) const {
  if (v >= n_) {
    throw std::out_of_range("node id " + std::to_string(v) + " out of range [0, " +
                            std::to_string(n_) + ")");
  }
}

bool DirectedGraph::has_edge(NodeId u, NodeId v) const {
  auto out = out_neighbors(u);
  return std::binary_search(out.begin(), out.end(), v);
}

NodeId DirectedGraph::node(Label label) const {
  if (ids_.size() == 0) {
    if (label >= n_) throw std::out_of_range("unknown node label " + std::to_string(label));
    return static_cast<NodeId>(label);
  }
  auto id = ids_.find(label);
  if (!id) throw std::out_of_range("unknown node label " + std::to_string(label));
  return *id;
}

namespace {

bool is_blank(char ch) { return ch == '\t' || ch == ' ' || ch == '\r'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_blank(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_blank(line[j])) ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

Label parse_label(std::string_view token, std::size_t line_no) {
  Label value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line_no, "expected non-negative integer label, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

DirectedGraph load_edge_list(std::istream& in, const IdMap* seed_ids) {
  IdMap ids = seed_ids ? *seed_ids : IdMap{};
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::string line;
  std::size_t line_no = 0;
  bool saw_any = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;
    auto fields = split_fields(view);
    if (fields.empty()) continue;
    if (fields.size() != 2) {
      throw ParseError(line_no, "expected 2 fields, got " + std::to_string(fields.size()));
    }
    const NodeId u = ids.intern(parse_label(fields[0], line_no));
    const NodeId v = ids.intern(parse_label(fields[1], line_no));
    saw_any = true;
    edges.emplace_back(u, v);
  }
  if (!saw_any) throw ParseError(line_no, "empty edge list");
  const std::size_t n = ids.size();
  return DirectedGraph::from_edges(n, edges, std::move(ids));
}

DirectedGraph load_edge_list_file(const std::string& path, const IdMap* seed_ids) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  return load_edge_list(in, seed_ids);
}

void write_edge_list(std::ostream& out, const DirectedGraph& g) {
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    auto outs = g.out_neighbors(u);
    if (outs.empty() && g.in_degree(u) == 0) {
      out << g.label(u) << '\t' << g.label(u) << '\n';
      continue;
    }
    for (NodeId v : outs) out << g.label(u) << '\t' << g.label(v) << '\n';
  }
}

void write_id_map(std::ostream& out, const DirectedGraph& g) {
  for (NodeId v = 0; v < g.num_nodes(); ++v) out << g.label(v) << '\t' << v << '\n';
}

IdMap read_id_map(std::istream& in) {
  std::vector<std::pair<NodeId, Label>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;
    auto fields = split_fields(view);
    if (fields.size() != 2) throw ParseError(line_no, "expected 'label<TAB>dense_id'");
    const Label label = parse_label(fields[0], line_no);
    const Label id = parse_label(fields[1], line_no);
    if (id >= kNoNode) throw ParseError(line_no, "dense id too large");
    rows.emplace_back(static_cast<NodeId>(id), label);
  }
  std::sort(rows.begin(), rows.end());
  IdMap ids;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != i) throw ParseError(0, "id map is not a dense 0..n-1 assignment");
    ids.intern(rows[i].second);
  }
  if (ids.size() != rows.size()) throw ParseError(0, "id map has duplicate labels");
  return ids;
}

}  // namespace probesim
