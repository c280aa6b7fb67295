#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "probesim/graph.hpp"
#include "probesim/rng.hpp"

namespace probesim {

/// Dense symmetric n x n SimRank matrix with unit diagonal.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {
    for (std::size_t i = 0; i < n; ++i) values_[i * n + i] = 1.0;
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(NodeId u, NodeId v) const noexcept { return values_[u * n_ + v]; }
  double& at(NodeId u, NodeId v) noexcept { return values_[u * n_ + v]; }
  std::span<const double> row(NodeId u) const noexcept { return {values_.data() + u * n_, n_}; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Power Method S <- (c P^T S P) v I, starting from S = I. Each off-diagonal
/// entry is c / (|I(u)| |I(v)|) * sum over in-neighbor pairs of S(x, y); pairs
/// where either side has no in-neighbors stay 0. OpenMP-parallel over rows.
SimilarityMatrix power_method(const DirectedGraph& g, double c, int iterations);

/// Reference implementation: evaluates the recursive definition entry by
/// entry with the quadruple sum. O(n^2 d^2) per iteration, for tests only.
SimilarityMatrix power_method_serial(const DirectedGraph& g, double c, int iterations);

/// Iteration count ceil(log(tol) / log(c)) so that c^T <= tol.
int ground_truth_iterations(double c, double tol);
SimilarityMatrix ground_truth(const DirectedGraph& g, double c, double tol);

inline constexpr std::uint64_t kDefaultPathCap = 10'000'000;

/// First-meeting probability P(v, prefix) by exhaustive enumeration of
/// reverse paths from v of exactly |prefix| - 1 steps. Independent of the
/// layered PROBE traversal; throws CapExceeded after `path_cap` extensions.
double first_meeting_prob_bruteforce(const DirectedGraph& g, double c,
                                     std::span<const NodeId> prefix, NodeId v,
                                     std::uint64_t path_cap = kDefaultPathCap);

/// Pair count ceil(ln(1/delta) / (2 eps^2)) for the single-pair estimator.
std::uint64_t mc_pair_count(double eps, double delta);

/// Single-pair Monte Carlo: fraction of sqrt(c)-walk pairs from u and v that
/// occupy the same node at the same position.
double mc_single_pair(const DirectedGraph& g, double c, NodeId u, NodeId v, double eps,
                      double delta, Rng& rng);

}  // namespace probesim
