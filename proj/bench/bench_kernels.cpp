#include <benchmark/benchmark.h>

#include <thread>
#include <utility>
#include <vector>

#include "probesim/exact.hpp"
#include "probesim/mc.hpp"
#include "probesim/probesim.hpp"
#include "probesim/rng.hpp"

namespace {

using namespace probesim;

DirectedGraph random_graph(std::size_t n, double avg_degree, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  const auto m = static_cast<std::size_t>(avg_degree * static_cast<double>(n));
  for (std::size_t i = 0; i < m; ++i) {
    const auto u = static_cast<NodeId>(rng.below(n));
    const auto v = static_cast<NodeId>(rng.below(n));
    edges.emplace_back(u, v);
  }
  return DirectedGraph::from_edges(n, edges);
}

int max_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

void BM_PowerMethodSerial(benchmark::State& state) {
  const auto g = random_graph(static_cast<std::size_t>(state.range(0)), 5.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(power_method_serial(g, 0.6, 5));
}
BENCHMARK(BM_PowerMethodSerial)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_PowerMethodParallel(benchmark::State& state) {
  const auto g = random_graph(static_cast<std::size_t>(state.range(0)), 5.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(power_method(g, 0.6, 5));
}
BENCHMARK(BM_PowerMethodParallel)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

// range(0): threads (0 = all hardware threads); range(1): batch flag.
void BM_SingleSource(benchmark::State& state) {
  const auto g = random_graph(20000, 8.0, 2);
  const int threads = state.range(0) == 0 ? max_threads() : static_cast<int>(state.range(0));
  const auto params = budget_params(0.1, 0.01, 0.6, g.num_nodes(), ProbeStrategy::kHybrid,
                                    state.range(1) != 0);
  NodeId source = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(single_source(g, source, params, 7, threads));
    source = (source + 97) % static_cast<NodeId>(g.num_nodes());
  }
  state.counters["threads"] = threads;
}
BENCHMARK(BM_SingleSource)
    ->Args({1, 1})
    ->Args({0, 1})
    ->Args({1, 0})
    ->Args({0, 0})
    ->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const auto g = random_graph(2000, 8.0, 3);
  const int threads = state.range(0) == 0 ? max_threads() : static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_single_source(g, 0, 0.6, 0.1, 0.01, 7, threads));
  state.counters["threads"] = threads;
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
