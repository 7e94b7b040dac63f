#include <benchmark/benchmark.h>

#include <random>

#include "folkswarm/fsn_network.hpp"
#include "folkswarm/ingestion.hpp"
#include "folkswarm/swarm_engine.hpp"

using namespace folkswarm;

namespace {

const OntologyTree& synthetic_tree() {
  static const OntologyTree tree = default_synthetic_ontology();
  return tree;
}

std::vector<FDTag> synthetic_tags(std::size_t n) {
  return to_fd_tags(synth_corpus(n, 10, 42, synthetic_tree()), synthetic_tree()).tags;
}

ScenarioConfig swarm(BehaviorKind behavior, std::size_t n, unsigned workers) {
  ScenarioConfig cfg;
  cfg.behavior = behavior;
  cfg.n_agents = n;
  cfg.init = UniformRandomInit{7, true, synthetic_tree().node(synthetic_tree().root()).id,
                               kDefaultElasticity};
  cfg.goal = GoalSpec{{0.5, 0.5}, {}, kDefaultElasticity};
  cfg.max_ticks = 1'000'000;
  cfg.workers = workers;
  return cfg;
}

void BM_EngineStep(benchmark::State& state, BehaviorKind behavior) {
  const auto cfg = swarm(behavior, static_cast<std::size_t>(state.range(0)),
                         static_cast<unsigned>(state.range(1)));
  SimState s = init_sim(cfg, synthetic_tree());
  for (auto _ : state) {
    s = step(std::move(s), cfg, synthetic_tree());
    s.trajectory.resize(1);
    benchmark::DoNotOptimize(s.tick);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_EngineStep, disperse, BehaviorKind::Disperse)
    ->Args({20, 1})->Args({200, 1})->Args({1000, 1})->Args({1000, 4})->UseRealTime();
BENCHMARK_CAPTURE(BM_EngineStep, flock, BehaviorKind::Flock)->Args({200, 1})->Args({1000, 1});
BENCHMARK_CAPTURE(BM_EngineStep, compound, BehaviorKind::Compound)->Args({200, 1});

void BM_SynthCorpus(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(synth_corpus(n, 10, 42, synthetic_tree()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SynthCorpus)->Arg(10'000)->Arg(100'000);

void BM_BuildFsn(benchmark::State& state) {
  const auto tags = synthetic_tags(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_fsn(tags, synthetic_tree()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildFsn)->Arg(1'000)->Arg(10'000);

void BM_AcquaintanceMatch(benchmark::State& state) {
  const auto tags = synthetic_tags(10'000);
  const AcquaintanceIndex index(tags, synthetic_tree(), kDefaultEdgeLevel);
  std::mt19937_64 gen(3);
  for (auto _ : state) benchmark::DoNotOptimize(index.match(tags[gen() % tags.size()]));
}
BENCHMARK(BM_AcquaintanceMatch);

void BM_AvgPathLength(benchmark::State& state) {
  const auto g = preferential_attachment_graph(static_cast<std::size_t>(state.range(0)), 2, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(avg_path_length(g, static_cast<unsigned>(state.range(1))));
  }
}
BENCHMARK(BM_AvgPathLength)->Args({2'000, 1})->Args({2'000, 4})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_LocalClustering(benchmark::State& state) {
  const auto g = preferential_attachment_graph(static_cast<std::size_t>(state.range(0)), 2, 7);
  for (auto _ : state) benchmark::DoNotOptimize(local_clustering(g));
}
BENCHMARK(BM_LocalClustering)->Arg(2'000)->Arg(20'000);

}  // namespace

BENCHMARK_MAIN();
