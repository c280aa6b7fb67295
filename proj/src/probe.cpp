#include "probesim/probe.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace probesim {

ProbeStrategy parse_strategy(std::string_view name) {
  if (name == "det" || name == "deterministic") return ProbeStrategy::kDeterministic;
  if (name == "rand" || name == "randomized") return ProbeStrategy::kRandomized;
  if (name == "hybrid") return ProbeStrategy::kHybrid;
  throw ParameterError("unknown probe strategy '" + std::string(name) + "'");
}

std::string_view to_string(ProbeStrategy s) noexcept {
  switch (s) {
    case ProbeStrategy::kDeterministic: return "det";
    case ProbeStrategy::kRandomized: return "rand";
    case ProbeStrategy::kHybrid: return "hybrid";
  }
  return "hybrid";
}

std::uint64_t trial_count(double c, double eps, double delta, std::size_t n) {
  check_decay(c);
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("sampling error eps must be in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must be in (0, 1)");
  if (n == 0) throw ParameterError("graph has no nodes");
  const double trials = std::ceil(3.0 * c / (eps * eps) * std::log(static_cast<double>(n) / delta));
  if (!std::isfinite(trials) || trials >= 0x1.0p64) {
    throw ParameterError("eps too small: trial count overflows");
  }
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(trials));
}

namespace {

void check_common(double eps_a, double delta, double c) {
  check_decay(c);
  if (!(eps_a > 0.0 && eps_a < 1.0)) throw ParameterError("eps_a must be in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must be in (0, 1)");
}

}  // namespace

ProbeParams budget_params(double eps_a, double delta, double c, std::size_t n,
                          ProbeStrategy strategy, bool batch) {
  check_common(eps_a, delta, c);
  ProbeParams p;
  p.c = c;
  p.eps_a = eps_a;
  p.delta = delta;
  p.eps = eps_a / 2.0;
  p.eps_t = eps_a / 2.0;
  p.eps_p = (1.0 - std::sqrt(c)) / (1.0 + p.eps) * eps_a / 4.0;
  p.n_r = trial_count(c, p.eps, delta, n);
  p.ell_t = truncation_length(p.eps_t, c);
  p.strategy = strategy;
  p.batch = batch;
  return p;
}

ProbeParams budget_params_with(double eps_a, double delta, double c, std::size_t n, double eps_t,
                               double eps_p, ProbeStrategy strategy, bool batch) {
  check_common(eps_a, delta, c);
  if (!(eps_t >= 0.0 && eps_t < 1.0)) throw ParameterError("eps_t must be in [0, 1)");
  if (!(eps_p >= 0.0 && eps_p < 1.0)) throw ParameterError("eps_p must be in [0, 1)");
  const double k = eps_p / (1.0 - std::sqrt(c));
  const double eps = (eps_a - k - eps_t / 2.0) / (1.0 + k);
  if (!(eps > 0.0)) {
    throw ParameterError("eps_t and eps_p leave no sampling budget within eps_a");
  }
  ProbeParams p;
  p.c = c;
  p.eps_a = eps_a;
  p.delta = delta;
  p.eps = eps;
  p.eps_t = eps_t;
  p.eps_p = eps_p;
  p.n_r = trial_count(c, eps, delta, n);
  p.ell_t = eps_t > 0.0 ? truncation_length(eps_t, c) : kUnbounded;
  p.strategy = strategy;
  p.batch = batch;
  return p;
}

double budget_sum(const ProbeParams& p) noexcept {
  return p.eps + (1.0 + p.eps) / (1.0 - std::sqrt(p.c)) * p.eps_p + p.eps_t / 2.0;
}

void check_prefix(const DirectedGraph& g, std::span<const NodeId> prefix) {
  if (prefix.size() < 2) throw ParameterError("walk prefix must have at least 2 nodes");
  for (NodeId v : prefix) (void)g.in_degree(v);
  for (std::size_t j = 0; j + 1 < prefix.size(); ++j) {
    if (!g.has_edge(prefix[j + 1], prefix[j])) {
      throw UsageError("prefix step " + std::to_string(j) + " is not an in-edge");
    }
  }
}

Prober::Prober(const DirectedGraph& g, double c)
    : g_(g),
      sqrt_c_(std::sqrt(c)),
      cur_(g.num_nodes()),
      next_(g.num_nodes()),
      level_mark_(g.num_nodes(), 0),
      seen_mark_(g.num_nodes(), 0) {}

bool Prober::deterministic(std::span<const NodeId> prefix, double eps_p, double work_limit,
                           SparseAccumulator& out, double scale) {
  const std::size_t i = prefix.size();
  cur_.clear();
  next_.clear();
  cur_.add(prefix[i - 1], 1.0);
  // decay = sqrt(c)^(i-j-1) for the current level j
  double decay = std::pow(sqrt_c_, static_cast<double>(i - 1));
  double work = 0.0;
  for (std::size_t j = 0; j + 1 < i; ++j) {
    const NodeId excluded = prefix[i - j - 2];
    for (NodeId x : cur_.touched()) {
      const double score = cur_[x];
      if (score * decay <= eps_p) continue;
      const auto outs = g_.out_neighbors(x);
      work += static_cast<double>(outs.size());
      for (NodeId v : outs) {
        if (v == excluded) continue;
        next_.add(v, sqrt_c_ / static_cast<double>(g_.in_degree(v)) * score);
      }
    }
    cur_.clear();
    std::swap(cur_, next_);
    decay /= sqrt_c_;
    if (cur_.touched().empty()) return true;
    if (work > work_limit) {
      cur_.clear();
      return false;
    }
  }
  for (NodeId v : cur_.touched()) out.add(v, scale * cur_[v]);
  cur_.clear();
  return true;
}

void Prober::randomized(std::span<const NodeId> prefix, Rng& rng, SparseAccumulator& out,
                        double scale) {
  const std::size_t i = prefix.size();
  const std::size_t n = g_.num_nodes();
  frontier_.assign(1, prefix[i - 1]);
  std::uint64_t cur_stamp = ++stamp_;
  level_mark_[prefix[i - 1]] = cur_stamp;

  for (std::size_t j = 0; j + 1 < i; ++j) {
    const NodeId excluded = prefix[i - j - 2];
    std::size_t degree_sum = 0;
    for (NodeId x : frontier_) degree_sum += g_.out_degree(x);

    candidates_.clear();
    const bool all_nodes = degree_sum > n;
    if (!all_nodes) {
      const std::uint64_t seen = ++stamp_;
      for (NodeId x : frontier_) {
        for (NodeId v : g_.out_neighbors(x)) {
          if (seen_mark_[v] == seen) continue;
          seen_mark_[v] = seen;
          candidates_.push_back(v);
        }
      }
    }

    const std::uint64_t next_stamp = ++stamp_;
    frontier_next_.clear();
    auto visit = [&](NodeId x) {
      if (x == excluded) return;
      const auto in = g_.in_neighbors(x);
      if (in.empty()) return;
      const NodeId v = in[rng.below(in.size())];
      if (level_mark_[v] == cur_stamp && rng.uniform() < sqrt_c_) frontier_next_.push_back(x);
    };
    if (all_nodes) {
      for (NodeId x = 0; x < n; ++x) visit(x);
    } else {
      for (NodeId x : candidates_) visit(x);
    }
    // Marks move to the new level only after every candidate was tested
    // against the current one.
    for (NodeId x : frontier_next_) level_mark_[x] = next_stamp;
    std::swap(frontier_, frontier_next_);
    cur_stamp = next_stamp;
    if (frontier_.empty()) return;
  }
  for (NodeId v : frontier_) out.add(v, scale);
}

void Prober::dispatch(std::span<const NodeId> prefix, std::uint64_t weight,
                      const ProbeParams& params, Rng& rng, SparseAccumulator& out, double scale) {
  constexpr double kNoLimit = std::numeric_limits<double>::infinity();
  switch (params.strategy) {
    case ProbeStrategy::kDeterministic:
      deterministic(prefix, params.eps_p, kNoLimit, out, scale);
      return;
    case ProbeStrategy::kHybrid: {
      const double limit =
          params.c0 * static_cast<double>(weight) * static_cast<double>(g_.num_nodes());
      if (deterministic(prefix, params.eps_p, limit, out, scale)) return;
      break;
    }
    case ProbeStrategy::kRandomized:
      break;
  }
  const double each = scale / static_cast<double>(weight);
  for (std::uint64_t k = 0; k < weight; ++k) randomized(prefix, rng, out, each);
}

ScoreMap deterministic_probe(const DirectedGraph& g, std::span<const NodeId> prefix, double c,
                             double eps_p) {
  check_decay(c);
  check_prefix(g, prefix);
  if (eps_p < 0.0) throw ParameterError("eps_p must be >= 0");
  Prober prober(g, c);
  SparseAccumulator out(g.num_nodes());
  prober.deterministic(prefix, eps_p, std::numeric_limits<double>::infinity(), out, 1.0);
  return ScoreMap(out.drain());
}

std::vector<NodeId> randomized_probe(const DirectedGraph& g, std::span<const NodeId> prefix,
                                     double c, Rng& rng) {
  check_decay(c);
  check_prefix(g, prefix);
  Prober prober(g, c);
  SparseAccumulator out(g.num_nodes());
  prober.randomized(prefix, rng, out, 1.0);
  std::vector<NodeId> nodes;
  for (const auto& e : out.drain()) nodes.push_back(e.node);
  return nodes;
}

ScoreMap probe_dispatch(const DirectedGraph& g, std::span<const NodeId> prefix,
                        std::uint64_t weight, const ProbeParams& params, Rng& rng) {
  check_decay(params.c);
  check_prefix(g, prefix);
  if (weight == 0) throw ParameterError("weight must be >= 1");
  Prober prober(g, params.c);
  SparseAccumulator out(g.num_nodes());
  prober.dispatch(prefix, weight, params, rng, out, 1.0);
  return ScoreMap(out.drain());
}

}  // namespace probesim
