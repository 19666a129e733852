#include <benchmark/benchmark.h>

#include "randgame/cones.hpp"
#include "randgame/ensembles.hpp"
#include "randgame/parallel.hpp"
#include "randgame/trials.hpp"

using namespace randgame;

namespace {

constexpr std::size_t kBatch = 64;

trials::GameTrial one_game(std::size_t n, std::size_t i) {
  return trials::run_game_trial(ensembles::EnsembleSpec::gaussian(), n, n,
                                derive_stream(RandomSeed{42, 0}, i), {});
}

void BM_GamesSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto out = map_trials_serial(kBatch, [&](std::size_t i) { return one_game(n, i); });
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * kBatch);
}

void BM_GamesParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto out = map_trials_parallel(kBatch, [&](std::size_t i) { return one_game(n, i); });
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * kBatch);
}

void BM_DeltaSerial(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(cones::estimate_delta(0.05, 256, 512, {7, 0}, Execution::serial()));
}

void BM_DeltaParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cones::estimate_delta(0.05, 256, 512, {7, 0}));
}

}  // namespace

BENCHMARK(BM_GamesSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GamesParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeltaSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeltaParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
