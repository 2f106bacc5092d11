#include <benchmark/benchmark.h>

#include <numeric>

#include "univ/connector.hpp"
#include "univ/cycle_search.hpp"
#include "univ/embedder.hpp"
#include "univ/layers.hpp"
#include "univ/oracle.hpp"
#include "univ/spanning.hpp"

using namespace univ;

namespace {

VertexList range(Vertex from, Vertex to) {
  VertexList v(to - from);
  std::iota(v.begin(), v.end(), from);
  return v;
}

void BM_MakeLayers(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(make_layers(n, 0.3, seed++));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MakeLayers)->RangeMultiplier(2)->Range(128, 1024)->Complexity(benchmark::oNSquared);

void BM_TriangleFactor(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  HostGraph g = gen_random_graph(n, 0.4, RandomSeed{7, "G"});
  VertexList all = range(0, n);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    FactorParams params;
    params.seed = seed++;
    benchmark::DoNotOptimize(find_cycle_factor(g, all, 3, params));
  }
}
BENCHMARK(BM_TriangleFactor)->Arg(150)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_ConnectPairs(benchmark::State& state) {
  const std::size_t n = 600, t = static_cast<std::size_t>(state.range(0));
  HostGraph g = gen_random_graph(n, 0.3, RandomSeed{3, "G"});
  ConnectionRequest req;
  req.sources = range(0, t);
  req.targets = range(t, 2 * t);
  req.lengths.assign(t, 6);
  req.workspace = range(2 * t, n);
  ConnectorParams params;
  for (auto _ : state) {
    params.seed++;
    benchmark::DoNotOptimize(connect_pairs(g.arcs(), req, params));
  }
}
BENCHMARK(BM_ConnectPairs)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_SpanningDirect(benchmark::State& state) {
  const std::size_t t = 8, length = static_cast<std::size_t>(state.range(0));
  const std::size_t n = 2 * t + t * (length - 1);
  HostGraph g = gen_random_graph(n, 0.5, RandomSeed{5, "G"});
  SpanningParams params;
  params.mode = SpanningMode::Direct;
  for (auto _ : state) {
    params.connector.seed++;
    benchmark::DoNotOptimize(connect_pairs_spanning(g, range(0, t), range(t, 2 * t), length, range(2 * t, n), params));
  }
}
BENCHMARK(BM_SpanningDirect)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_OracleUniversality(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  HostGraph g = gen_random_graph(n, 0.8, RandomSeed{1, "G"});
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_universality(n, 3, g));
}
BENCHMARK(BM_OracleUniversality)->DenseRange(8, 12, 2)->Unit(benchmark::kMillisecond);

void BM_EmbedLongCycle(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ExposureLayers layers = make_layers(n, 0.5, 9);
  CycleSpec spec = CycleSpec::from_lengths({n});
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(embed(layers, spec, practical_profile(), seed++));
}
BENCHMARK(BM_EmbedLongCycle)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
