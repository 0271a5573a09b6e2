#include <benchmark/benchmark.h>
#include <spdlog/spdlog.h>

#include "feedbalance/dynamics.hpp"
#include "feedbalance/generators.hpp"
#include "feedbalance/linsolve.hpp"
#include "feedbalance/optimizer.hpp"
#include "feedbalance/projection.hpp"

namespace feedbalance {
namespace {

// Erdős–Rényi graph with average out-degree 10 and centered innate opinions.
struct Instance {
  Graph graph;
  OpinionVector innate;
};

Instance MakeInstance(NodeId n) {
  GeneratorConfig gen;
  gen.model = GraphModel::kErdosRenyi;
  gen.n = n;
  gen.edge_probability = 10.0 / (n - 1);
  gen.seed = 3;
  Instance out{Generate(gen), {}};
  out.innate = MeanCenter(InferInnate(out.graph, GenerateUniform(n, 1.0, 4)));
  return out;
}

void BM_SolveShifted(benchmark::State& state) {
  const Instance in = MakeInstance(static_cast<NodeId>(state.range(0)));
  const auto orientation =
      state.range(1) ? Orientation::kTranspose : Orientation::kForward;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        SolveShifted(in.graph, orientation, in.innate.values));
  }
  state.SetComplexityN(in.graph.num_edges());
}
BENCHMARK(BM_SolveShifted)
    ->ArgsProduct({{10000, 40000, 160000}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

void BM_Gradient(benchmark::State& state) {
  const Instance in = MakeInstance(static_cast<NodeId>(state.range(0)));
  const bool parallel = state.range(1) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Gradient(in.graph, in.innate, {}, parallel));
  }
  state.SetComplexityN(in.graph.num_edges());
}
BENCHMARK(BM_Gradient)
    ->ArgsProduct({{10000, 40000, 160000}, {0, 1}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_LcgdIteration(benchmark::State& state) {
  spdlog::set_level(spdlog::level::off);
  const Instance in = MakeInstance(static_cast<NodeId>(state.range(0)));
  OptimizerConfig cfg;
  cfg.max_iterations = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Lcgd(in.graph, in.innate, cfg));
  }
  state.SetComplexityN(in.graph.num_edges());
}
BENCHMARK(BM_LcgdIteration)
    ->RangeMultiplier(4)
    ->Range(10000, 160000)
    ->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oN);

void BM_ProjectRowStochastic(benchmark::State& state) {
  const Instance in = MakeInstance(static_cast<NodeId>(state.range(0)));
  std::vector<double> candidate(in.graph.weights().begin(),
                                in.graph.weights().end());
  for (std::size_t k = 0; k < candidate.size(); k += 7) candidate[k] -= 0.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ProjectRowStochastic(in.graph, candidate));
  }
  state.SetComplexityN(in.graph.num_edges());
}
BENCHMARK(BM_ProjectRowStochastic)
    ->RangeMultiplier(4)
    ->Range(10000, 160000)
    ->Complexity(benchmark::oN);

void BM_Sinkhorn(benchmark::State& state) {
  const Graph base = MakeInstance(static_cast<NodeId>(state.range(0))).graph;
  const Graph sym = base.SymmetrizedMax();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ProjectDoublyStochastic(sym, sym.weights()));
  }
  state.SetComplexityN(sym.num_edges());
}
BENCHMARK(BM_Sinkhorn)->Arg(10000)->Arg(40000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace feedbalance

BENCHMARK_MAIN();
