#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <optional>

#include "probesim/eval.hpp"
#include "probesim/exact.hpp"
#include "probesim/graph.hpp"
#include "probesim/mc.hpp"
#include "probesim/probesim.hpp"
#include "score_io.hpp"

namespace probesim::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 1;

struct QueryFlags {
  std::string graph;
  Label source = 0;
  double eps_a = 0.1;
  double delta = 0.01;
  double c = 0.6;
  std::uint64_t seed = kDefaultSeed;
  CLI::Option* seed_opt = nullptr;
  std::string probe = "hybrid";
  bool batch = true;
  double c0 = 1.0;
  std::optional<double> eps_t;
  std::optional<double> eps_p;
  std::string format = "tsv";
  std::string output;
  int threads = 1;
  std::size_t k = 50;
};

/// --seed wins; otherwise SIMRANK_SEED; otherwise the default.
std::uint64_t resolve_seed(const QueryFlags& f) {
  if (f.seed_opt != nullptr && f.seed_opt->count() > 0) return f.seed;
  if (const char* env = std::getenv("SIMRANK_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const auto value = std::strtoull(env, &end, 10);
    if (*end != '\0') throw ParameterError("SIMRANK_SEED is not an unsigned integer");
    return value;
  }
  return f.seed;
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string sig12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round6(double x) { return std::round(x * 1e6) / 1e6; }

/// Output sink that is either the caller's stream or a file.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void write_scores(std::ostream& os, const DirectedGraph& g, std::span<const ScoreEntry> entries,
                  const std::string& format) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& e : entries) arr.push_back({{"node", g.label(e.node)}, {"score", round6(e.score)}});
    os << arr.dump() << '\n';
    return;
  }
  for (const auto& e : entries) os << g.label(e.node) << '\t' << fixed6(e.score) << '\n';
}

void check_format(const std::string& format) {
  if (format != "tsv" && format != "json") throw ParameterError("--format must be tsv or json");
}

ProbeParams make_params(const QueryFlags& f, std::size_t n) {
  const auto strategy = parse_strategy(f.probe);
  ProbeParams p;
  if (f.eps_t || f.eps_p) {
    const ProbeParams split = budget_params(f.eps_a, f.delta, f.c, n, strategy, f.batch);
    p = budget_params_with(f.eps_a, f.delta, f.c, n, f.eps_t.value_or(split.eps_t),
                           f.eps_p.value_or(split.eps_p), strategy, f.batch);
  } else {
    p = budget_params(f.eps_a, f.delta, f.c, n, strategy, f.batch);
  }
  if (f.c0 < 0.0) throw ParameterError("--c0 must be >= 0");
  p.c0 = f.c0;
  return p;
}

void add_query_flags(CLI::App* cmd, QueryFlags& f, bool with_k) {
  cmd->add_option("--graph", f.graph, "Edge-list file")->required();
  cmd->add_option("--source", f.source, "Query node label")->required();
  cmd->add_option("--eps-a", f.eps_a, "Absolute error target")->capture_default_str();
  cmd->add_option("--delta", f.delta, "Failure probability")->capture_default_str();
  cmd->add_option("--c", f.c, "Decay factor")->capture_default_str();
  f.seed_opt = cmd->add_option("--seed", f.seed, "Master seed (env SIMRANK_SEED if absent)")
                   ->capture_default_str();
  cmd->add_option("--probe", f.probe, "det | rand | hybrid")->capture_default_str();
  cmd->add_flag("--batch,!--no-batch", f.batch, "Batch walks into a reachability tree")
      ->capture_default_str();
  cmd->add_option("--c0", f.c0, "Hybrid switch constant")->capture_default_str();
  cmd->add_option("--eps-t", f.eps_t, "Truncation parameter override");
  cmd->add_option("--eps-p", f.eps_p, "Probe pruning parameter override");
  cmd->add_option("--format", f.format, "tsv | json")->capture_default_str();
  cmd->add_option("--output", f.output, "Output file (stdout if absent)");
  cmd->add_option("--threads", f.threads, "Worker threads")->capture_default_str();
  if (with_k) cmd->add_option("--k", f.k, "Result size")->capture_default_str();
}

int cmd_ss(const QueryFlags& f, bool topk, std::ostream& out) {
  check_format(f.format);
  if (f.threads < 1) throw ParameterError("--threads must be >= 1");
  const DirectedGraph g = load_edge_list_file(f.graph);
  const NodeId source = g.node(f.source);
  const ProbeParams params = make_params(f, g.num_nodes());
  const std::uint64_t seed = resolve_seed(f);
  Sink sink(f.output, out);
  if (topk) {
    const auto result = top_k(g, source, f.k, params, seed, f.threads);
    write_scores(*sink, g, result, f.format);
  } else {
    const auto scores = single_source(g, source, params, seed, f.threads);
    write_scores(*sink, g, scores.ranked(), f.format);
  }
  return kExitOk;
}

struct ExactFlags {
  std::string graph;
  double c = 0.6;
  std::optional<int> iters;
  std::optional<double> tol;
  std::optional<Label> source;
  std::string output;
};

int cmd_exact(const ExactFlags& f, std::ostream& out) {
  const DirectedGraph g = load_edge_list_file(f.graph);
  const int iterations = f.iters ? *f.iters : ground_truth_iterations(f.c, f.tol.value_or(1e-12));
  const std::optional<NodeId> source =
      f.source ? std::optional<NodeId>(g.node(*f.source)) : std::nullopt;
  const SimilarityMatrix s = power_method(g, f.c, iterations);
  Sink sink(f.output, out);
  const auto n = static_cast<NodeId>(g.num_nodes());
  for (NodeId u = 0; u < n; ++u) {
    if (source && u != *source) continue;
    for (NodeId v = 0; v < n; ++v)
      *sink << g.label(u) << '\t' << g.label(v) << '\t' << sig12(s(u, v)) << '\n';
  }
  return kExitOk;
}

struct McFlags {
  QueryFlags q;
  double eps = 0.1;
};

int cmd_mc(const McFlags& f, std::ostream& out) {
  check_format(f.q.format);
  if (f.q.threads < 1) throw ParameterError("--threads must be >= 1");
  const DirectedGraph g = load_edge_list_file(f.q.graph);
  const NodeId source = g.node(f.q.source);
  const auto scores =
      mc_single_source(g, source, f.q.c, f.eps, f.q.delta, resolve_seed(f.q), f.q.threads);
  Sink sink(f.q.output, out);
  write_scores(*sink, g, scores.ranked(), f.q.format);
  return kExitOk;
}

/// Score rows of one query, translated into a local dense id space.
struct LocalRow {
  std::vector<std::pair<NodeId, double>> entries;
};

json metrics_json(const MetricsReport& r) {
  return {{"abs_error", r.abs_error},
          {"precision_at_k", r.precision_at_k},
          {"ndcg_at_k", r.ndcg_at_k},
          {"kendall_tau", r.kendall_tau},
          {"k", r.k}};
}

struct EvalFlags {
  std::string pred;
  std::string truth;
  std::size_t k = 50;
  std::optional<Label> source;
  std::string output;
};

/// Picks the rows that belong to `query` (3-column files) or all rows
/// (2-column files). Infers the query from a 3-column file with one query.
std::vector<ScoreRow> rows_for_query(const std::vector<ScoreRow>& rows,
                                     std::optional<Label>& query, const char* what) {
  std::optional<Label> only;
  bool single = true;
  for (const auto& r : rows) {
    if (!r.query) continue;
    if (only && *only != *r.query) single = false;
    only = r.query;
  }
  if (only && !query) {
    if (!single) {
      throw ParameterError(std::string(what) + " holds several queries; pass --source");
    }
    query = only;
  }
  std::vector<ScoreRow> out;
  for (const auto& r : rows) {
    if (r.query && query && *r.query != *query) continue;
    out.push_back(r);
  }
  return out;
}

int cmd_eval(const EvalFlags& f, std::ostream& out) {
  if (f.k < 1) throw ParameterError("--k must be >= 1");
  std::optional<Label> query = f.source;
  const auto truth_rows = rows_for_query(read_score_file(f.truth), query, "truth file");
  const auto pred_rows = rows_for_query(read_score_file(f.pred), query, "prediction file");

  IdMap ids;
  if (query) ids.intern(*query);
  for (const auto& r : truth_rows) ids.intern(r.node);
  for (const auto& r : pred_rows) ids.intern(r.node);
  const NodeId q = query ? *ids.find(*query) : kNoNode;

  std::vector<double> truth(ids.size(), 0.0);
  for (const auto& r : truth_rows) truth[*ids.find(r.node)] = r.score;

  RankedList result{q, {}};
  std::vector<ScoreEntry> est;
  for (const auto& r : pred_rows) {
    const NodeId v = *ids.find(r.node);
    if (v == q) continue;
    if (std::any_of(est.begin(), est.end(), [v](const ScoreEntry& e) { return e.node == v; })) {
      throw ParameterError("prediction file lists node " + std::to_string(r.node) + " twice");
    }
    est.push_back({v, r.score});
  }
  result.entries = est;
  std::stable_sort(result.entries.begin(), result.entries.end(),
                   [](const ScoreEntry& a, const ScoreEntry& b) { return a.score > b.score; });

  const MetricsReport report = evaluate(ScoreMap(est), result, truth, q, f.k);
  Sink sink(f.output, out);
  *sink << metrics_json(report).dump(2) << '\n';
  return kExitOk;
}

struct BenchFlags {
  QueryFlags q;
  std::size_t queries = 10;
  std::string truth;
};

int cmd_bench(const BenchFlags& f, std::ostream& out) {
  if (f.q.threads < 1) throw ParameterError("--threads must be >= 1");
  if (f.queries < 1) throw ParameterError("--queries must be >= 1");
  const DirectedGraph g = load_edge_list_file(f.q.graph);
  const ProbeParams params = make_params(f.q, g.num_nodes());
  const std::uint64_t seed = resolve_seed(f.q);

  std::vector<NodeId> candidates;
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    if (g.in_degree(v) > 0) candidates.push_back(v);
  if (candidates.empty()) throw ParameterError("no node has a nonzero in-degree");
  Rng rng(seed, StreamDomain::kSampling, 0);
  const std::size_t count = std::min(f.queries, candidates.size());
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(candidates[i], candidates[i + rng.below(candidates.size() - i)]);
  }
  candidates.resize(count);

  std::map<Label, std::map<Label, double>> truth;
  if (!f.truth.empty()) {
    for (const auto& r : read_score_file(f.truth)) {
      if (!r.query) throw ParameterError("bench truth must be a 'u<TAB>v<TAB>score' matrix");
      truth[*r.query][r.node] = r.score;
    }
  }

  double total_ms = 0.0;
  MetricsReport mean;
  std::size_t evaluated = 0;
  json nodes = json::array();
  const std::size_t k = std::min(f.q.k, g.num_nodes() - 1);
  for (NodeId u : candidates) {
    nodes.push_back(g.label(u));
    const auto start = std::chrono::steady_clock::now();
    const ScoreMap scores = single_source(g, u, params, seed, f.q.threads);
    total_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
    const auto it = truth.find(g.label(u));
    if (it == truth.end() || k < 1) continue;
    std::vector<double> row(g.num_nodes(), 0.0);
    for (const auto& [label, score] : it->second) {
      if (auto id = g.ids().find(label)) row[*id] = score;
    }
    const RankedList result{u, rank_top_k(scores, g.num_nodes(), u, k)};
    const MetricsReport r = evaluate(scores, result, row, u, k);
    mean.abs_error += r.abs_error;
    mean.precision_at_k += r.precision_at_k;
    mean.ndcg_at_k += r.ndcg_at_k;
    mean.kendall_tau += r.kendall_tau;
    ++evaluated;
  }

  json report = {{"queries", count},
                 {"query_nodes", nodes},
                 {"mean_wall_ms", total_ms / static_cast<double>(count)},
                 {"n_r", params.n_r}};
  if (evaluated > 0) {
    const double m = static_cast<double>(evaluated);
    mean.abs_error /= m;
    mean.precision_at_k /= m;
    mean.ndcg_at_k /= m;
    mean.kendall_tau /= m;
    mean.k = k;
    report["metrics"] = metrics_json(mean);
    report["evaluated"] = evaluated;
  }
  Sink sink(f.q.output, out);
  *sink << report.dump(2) << '\n';
  return kExitOk;
}

struct IngestFlags {
  std::string input;
  std::string output;
  std::string map;
  bool undirected = false;
};

int cmd_ingest(const IngestFlags& f) {
  DirectedGraph g = load_edge_list_file(f.input);
  if (f.undirected) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      for (NodeId v : g.out_neighbors(u)) {
        edges.emplace_back(u, v);
        edges.emplace_back(v, u);
      }
    }
    g = DirectedGraph::from_edges(g.num_nodes(), edges, g.ids());
  }
  {
    std::ofstream out(f.output);
    if (!out) throw std::runtime_error("cannot open output file '" + f.output + "'");
    write_edge_list(out, g);
  }
  const std::string map_path = f.map.empty() ? f.output + ".map" : f.map;
  std::ofstream map(map_path);
  if (!map) throw std::runtime_error("cannot open id map file '" + map_path + "'");
  write_id_map(map, g);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Index-free single-source and top-k SimRank queries"};
  app.require_subcommand(1);

  IngestFlags ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Normalize an edge list and write its id map");
  ingest_cmd->add_option("--input", ingest.input, "Raw edge list")->required();
  ingest_cmd->add_option("--output", ingest.output, "Canonical edge list")->required();
  ingest_cmd->add_option("--map", ingest.map, "Id-map sidecar (default OUTPUT.map)");
  ingest_cmd->add_flag("--undirected", ingest.undirected, "Emit both directions of every edge");

  QueryFlags ss;
  add_query_flags(app.add_subcommand("ss", "Single-source SimRank estimates"), ss, false);
  QueryFlags topk;
  add_query_flags(app.add_subcommand("topk", "Top-k SimRank query"), topk, true);

  ExactFlags exact;
  auto* exact_cmd = app.add_subcommand("exact", "Power-method SimRank (row or matrix)");
  exact_cmd->add_option("--graph", exact.graph, "Edge-list file")->required();
  exact_cmd->add_option("--c", exact.c, "Decay factor")->capture_default_str();
  auto* iters_opt = exact_cmd->add_option("--iters", exact.iters, "Iteration count");
  auto* tol_opt = exact_cmd->add_option("--tol", exact.tol, "Absolute tolerance (default 1e-12)");
  iters_opt->excludes(tol_opt);
  exact_cmd->add_option("--source", exact.source, "Emit only this node's row");
  exact_cmd->add_option("--output", exact.output, "Output file (stdout if absent)");

  McFlags mc;
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo single-source baseline");
  mc_cmd->add_option("--graph", mc.q.graph, "Edge-list file")->required();
  mc_cmd->add_option("--source", mc.q.source, "Query node label")->required();
  mc_cmd->add_option("--eps", mc.eps, "Absolute error")->capture_default_str();
  mc_cmd->add_option("--delta", mc.q.delta, "Failure probability")->capture_default_str();
  mc_cmd->add_option("--c", mc.q.c, "Decay factor")->capture_default_str();
  mc.q.seed_opt = mc_cmd->add_option("--seed", mc.q.seed, "Master seed")->capture_default_str();
  mc_cmd->add_option("--format", mc.q.format, "tsv | json")->capture_default_str();
  mc_cmd->add_option("--output", mc.q.output, "Output file (stdout if absent)");
  mc_cmd->add_option("--threads", mc.q.threads, "Worker threads")->capture_default_str();

  EvalFlags eval;
  auto* eval_cmd = app.add_subcommand("eval", "Accuracy metrics of a ranked list against truth");
  eval_cmd->add_option("--pred", eval.pred, "Predicted 'node<TAB>score' list")->required();
  eval_cmd->add_option("--truth", eval.truth, "Truth row or matrix")->required();
  eval_cmd->add_option("--k", eval.k, "Cutoff")->capture_default_str();
  eval_cmd->add_option("--source", eval.source, "Query node label");
  eval_cmd->add_option("--output", eval.output, "Output file (stdout if absent)");

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time queries on sampled nodes");
  add_query_flags(bench_cmd, bench.q, true);
  bench_cmd->remove_option(bench_cmd->get_option("--source"));
  bench_cmd->remove_option(bench_cmd->get_option("--format"));
  bench_cmd->add_option("--queries", bench.queries, "Number of query nodes")->capture_default_str();
  bench_cmd->add_option("--truth", bench.truth, "Truth matrix from 'exact'");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (ingest_cmd->parsed()) return cmd_ingest(ingest);
    if (app.got_subcommand("ss")) return cmd_ss(ss, false, out);
    if (app.got_subcommand("topk")) return cmd_ss(topk, true, out);
    if (exact_cmd->parsed()) return cmd_exact(exact, out);
    if (mc_cmd->parsed()) return cmd_mc(mc, out);
    if (eval_cmd->parsed()) return cmd_eval(eval, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace probesim::cli
