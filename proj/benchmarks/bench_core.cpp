// Microbenchmarks for the integer dot-product / WTA hot path and the
// assembled step.
#include <benchmark/benchmark.h>

#include "mcol/harness.hpp"
#include "mcol/macrocolumn.hpp"
#include "mcol/rng.hpp"

using namespace mcol;

namespace {

DendriteWeights random_weights(int d, int s, std::uint64_t seed) {
  Rng rng(seed);
  DendriteWeights w(d, s, 0);
  for (auto& v : w.w) v = rng.below_int(9);
  return w;
}

SpikeVector random_volley(int width, int hot, std::uint64_t seed) {
  Rng rng(seed);
  SpikeVector v(width);
  for (int i = 0; i < hot; ++i) v.set_bit(rng.below_int(width));
  return v;
}

void BM_segment_potential(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const DendriteWeights w = random_weights(d, 1, 42);
  std::vector<int> column(static_cast<std::size_t>(d));
  for (int row = 0; row < d; ++row) column[static_cast<std::size_t>(row)] = w.at(row, 0);
  const SpikeVector x = random_volley(d, 4, 7);
  for (auto _ : state) benchmark::DoNotOptimize(segment_potential(column, x, 8));
}
BENCHMARK(BM_segment_potential)->Arg(81)->Arg(111);

void BM_dendrite_infer(benchmark::State& state) {
  const int segments = static_cast<int>(state.range(0));
  const DendriteWeights w = random_weights(81, segments, 42);
  const SpikeVector x = random_volley(81, 4, 7);
  const SdpParams p;
  for (auto _ : state) benchmark::DoNotOptimize(dendrite_infer(w, x, true, p));
}
BENCHMARK(BM_dendrite_infer)->Arg(4)->Arg(16);

void BM_wta(benchmark::State& state) {
  Rng rng(3);
  std::vector<int> potentials(40);
  for (auto& v : potentials) v = rng.below_int(33);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wta_1(potentials));
    benchmark::DoNotOptimize(wta_t(potentials));
  }
}
BENCHMARK(BM_wta);

void BM_pl_infer(benchmark::State& state) {
  PlaceCells pl(40, 10, 30, static_cast<int>(state.range(0)), SdpParams{});
  StateBundles sv;
  sv.eid = SpikeVector::one_hot_at(3, 40);
  sv.tail = SpikeVector::one_hot_at(2, 10);
  sv.dx = SpikeVector::one_hot_at(7, 30);
  sv.dy = SpikeVector::one_hot_at(11, 30);
  sv.head = SpikeVector::one_hot_at(5, 10);
  for (auto _ : state) benchmark::DoNotOptimize(pl.infer(sv));
}
BENCHMARK(BM_pl_infer)->Arg(4)->Arg(16);

void BM_mc_step_explore(benchmark::State& state) {
  Macrocolumn mc(Dims{40, 10, 30, 8}, SdpParams{});
  ControlInputs in;
  in.explore = true;
  in.eid_in = SpikeVector::one_hot_at(0, 40);
  in.xmove = 1;
  in.ymove = 2;
  int tick = 0;
  for (auto _ : state) {
    in.feature = (tick++ % 3 == 0) ? SpikeVector::one_hot_at(tick % 10, 10) : SpikeVector();
    benchmark::DoNotOptimize(mc.step(in));
  }
}
BENCHMARK(BM_mc_step_explore);

void BM_full_episode(benchmark::State& state) {
  BenchConfig cfg;
  cfg.n_envs = 8;
  const Scenario sc = make_scenario(cfg);
  Macrocolumn mc = sc.make_macrocolumn();
  run_exploration(mc, sc);
  for (auto _ : state) {
    Macrocolumn copy = mc;
    benchmark::DoNotOptimize(run_orientation_nav(copy, sc, 0));
  }
}
BENCHMARK(BM_full_episode);

}  // namespace

BENCHMARK_MAIN();
