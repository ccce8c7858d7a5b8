#include <benchmark/benchmark.h>

#include "ggmeval/extractors.hpp"
#include "ggmeval/graph_ops.hpp"
#include "ggmeval/nn.hpp"

namespace {

using namespace ggmeval;

GraphSet corpus(std::size_t graphs, std::size_t nodes) {
  SyntheticSpec spec;
  spec.num_graphs = graphs;
  spec.min_nodes = spec.max_nodes = nodes;
  spec.min_edge_prob = spec.max_edge_prob = 0.1;
  return synthetic_er_corpus(spec);
}

void BM_MpForward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = erdos_renyi(n, 0.1, 1);
  const Adjacency adj = Adjacency::of(g);
  ParamStore store;
  Rng rng(2);
  add_mp_layer(store, "l", 64, 32, rng);
  const auto layer = mp_layer(store, "l", Activation::kReLU);
  DenseMatrix h(n, 64);
  for (double& v : h.data()) v = rng.uniform01();
  for (auto _ : state) benchmark::DoNotOptimize(mp_forward(layer, adj, h));
}
BENCHMARK(BM_MpForward)->Arg(30)->Arg(300);

void BM_GraphDescriptor(benchmark::State& state) {
  const Graph g = erdos_renyi(static_cast<std::size_t>(state.range(0)), 0.1, 3);
  for (auto _ : state) benchmark::DoNotOptimize(graph_descriptor(g));
}
BENCHMARK(BM_GraphDescriptor)->Arg(50)->Arg(500);

void BM_ExtractRandomGnn(benchmark::State& state) {
  const GraphSet set = attach_features(corpus(200, 30), DegreeOneHot{});
  for (auto _ : state) benchmark::DoNotOptimize(extract_random_gnn(set, 32, 2, 4));
}
BENCHMARK(BM_ExtractRandomGnn)->Unit(benchmark::kMillisecond);

void BM_TrainGmaeEpoch(benchmark::State& state) {
  const GraphSet set = attach_features(corpus(200, 30), DegreeOneHot{});
  GmaeConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train_gmae(set, cfg));
}
BENCHMARK(BM_TrainGmaeEpoch)->Unit(benchmark::kMillisecond);

}  // namespace
