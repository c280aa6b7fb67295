#include "probesim/exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "probesim/walk.hpp"

namespace probesim {

namespace {

void check_iterations(int iterations) {
  if (iterations < 1) throw ParameterError("iterations must be >= 1");
}

void symmetrize(SimilarityMatrix& s) {
  const auto n = static_cast<NodeId>(s.size());
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) s.at(v, u) = s(u, v);
}

}  // namespace

SimilarityMatrix power_method(const DirectedGraph& g, double c, int iterations) {
  check_decay(c);
  check_iterations(iterations);
  const auto n = static_cast<std::int64_t>(g.num_nodes());
  const auto un = static_cast<std::size_t>(n);
  SimilarityMatrix s(un);
  SimilarityMatrix next(un);
  // partial(x, v) = sum_{y in I(v)} S(x, y)
  std::vector<double> partial(un * un, 0.0);

  for (int it = 0; it < iterations; ++it) {
    const auto prev = s.values();
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t x = 0; x < n; ++x) {
      const double* srow = prev.data() + x * n;
      double* prow = partial.data() + x * n;
      for (std::int64_t v = 0; v < n; ++v) {
        double acc = 0.0;
        for (NodeId y : g.in_neighbors(static_cast<NodeId>(v))) acc += srow[y];
        prow[v] = acc;
      }
    }
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t u = 0; u < n; ++u) {
      const auto in_u = g.in_neighbors(static_cast<NodeId>(u));
      double* out = next.values().data() + u * n;
      for (std::int64_t v = 0; v < n; ++v) {
        if (u == v) {
          out[v] = 1.0;
          continue;
        }
        const std::size_t dv = g.in_degree(static_cast<NodeId>(v));
        if (in_u.empty() || dv == 0) {
          out[v] = 0.0;
          continue;
        }
        double acc = 0.0;
        for (NodeId x : in_u) acc += partial[x * un + static_cast<std::size_t>(v)];
        out[v] = c / (static_cast<double>(in_u.size()) * static_cast<double>(dv)) * acc;
      }
    }
    symmetrize(next);
    std::swap(s, next);
  }
  return s;
}

SimilarityMatrix power_method_serial(const DirectedGraph& g, double c, int iterations) {
  check_decay(c);
  check_iterations(iterations);
  const auto n = static_cast<NodeId>(g.num_nodes());
  SimilarityMatrix s(n);
  for (int it = 0; it < iterations; ++it) {
    SimilarityMatrix next(n);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        const auto in_u = g.in_neighbors(u);
        const auto in_v = g.in_neighbors(v);
        double value = 0.0;
        if (!in_u.empty() && !in_v.empty()) {
          double sum = 0.0;
          for (NodeId x : in_u)
            for (NodeId y : in_v) sum += s(x, y);
          value = c * sum / (static_cast<double>(in_u.size()) * static_cast<double>(in_v.size()));
        }
        next.at(u, v) = value;
        next.at(v, u) = value;
      }
    }
    s = std::move(next);
  }
  return s;
}

int ground_truth_iterations(double c, double tol) {
  check_decay(c);
  if (!(tol > 0.0)) throw ParameterError("tolerance must be > 0");
  const double iters = std::ceil(std::log(tol) / std::log(c));
  return std::max(1, static_cast<int>(iters));
}

SimilarityMatrix ground_truth(const DirectedGraph& g, double c, double tol) {
  return power_method(g, c, ground_truth_iterations(c, tol));
}

double first_meeting_prob_bruteforce(const DirectedGraph& g, double c,
                                     std::span<const NodeId> prefix, NodeId v,
                                     std::uint64_t path_cap) {
  check_decay(c);
  if (prefix.size() < 2) throw ParameterError("walk prefix must have at least 2 nodes");
  for (std::size_t j = 0; j + 1 < prefix.size(); ++j) {
    if (!g.has_edge(prefix[j + 1], prefix[j])) throw UsageError("prefix is not a reverse path");
  }
  (void)g.in_degree(v);
  if (v == prefix.front()) throw UsageError("v must differ from the prefix start");

  const double sqrt_c = std::sqrt(c);
  const std::size_t last = prefix.size() - 1;
  std::uint64_t extensions = 0;
  double total = 0.0;

  struct Frame {
    NodeId node;
    std::size_t pos;  // 0-based position of `node` in the candidate path
    double prob;
  };
  std::vector<Frame> stack{{v, 0, 1.0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.pos == last) {
      if (f.node == prefix[last]) total += f.prob;
      continue;
    }
    const auto in = g.in_neighbors(f.node);
    const double step = f.prob * sqrt_c / static_cast<double>(in.size());
    for (NodeId x : in) {
      if (++extensions > path_cap) throw CapExceeded("path enumeration exceeded cap");
      const std::size_t pos = f.pos + 1;
      if (pos < last && x == prefix[pos]) continue;
      stack.push_back({x, pos, step});
    }
  }
  return total;
}

std::uint64_t mc_pair_count(double eps, double delta) {
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("eps must be in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must be in (0, 1)");
  return static_cast<std::uint64_t>(std::ceil(std::log(1.0 / delta) / (2.0 * eps * eps)));
}

double mc_single_pair(const DirectedGraph& g, double c, NodeId u, NodeId v, double eps,
                      double delta, Rng& rng) {
  check_decay(c);
  const std::uint64_t pairs = mc_pair_count(eps, delta);
  (void)g.in_degree(u);
  (void)g.in_degree(v);
  if (u == v) throw ParameterError("single-pair estimate needs u != v");
  const double sqrt_c = std::sqrt(c);
  std::uint64_t meets = 0;
  for (std::uint64_t k = 0; k < pairs; ++k) {
    NodeId a = u;
    NodeId b = v;
    for (;;) {
      a = walk_step(g, a, sqrt_c, rng);
      b = walk_step(g, b, sqrt_c, rng);
      if (a == kNoNode || b == kNoNode) break;
      if (a == b) {
        ++meets;
        break;
      }
    }
  }
  return static_cast<double>(meets) / static_cast<double>(pairs);
}

}  // namespace probesim
