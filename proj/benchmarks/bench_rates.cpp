#include <benchmark/benchmark.h>

#include "qkdrates/distill.hpp"
#include "qkdrates/mc.hpp"
#include "qkdrates/rates.hpp"

namespace {

const qkd::BellDiagonal kState = qkd::lambdas_from_qbers({0.1, 0.15, 0.1});

void BM_RateSixState(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        qkd::rate_six_state(kState, {qkd::Basis::Z, 1, 1.0}).rate);
}
BENCHMARK(BM_RateSixState);

void BM_AdMapBlock(benchmark::State& state) {
  const int b = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(qkd::ad_map_block(kState, b).p_succ);
}
BENCHMARK(BM_AdMapBlock)->Arg(2)->Arg(7);

void BM_AdRateSixState(benchmark::State& state) {
  const int b = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        qkd::ad_rate_six_state(kState, {qkd::Basis::Y, b, 1.0}).rate);
}
BENCHMARK(BM_AdRateSixState)->Arg(2)->Arg(7);

void BM_BellIndexOracle(benchmark::State& state) {
  const int b = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(qkd::bell_index_oracle(kState, b).p_succ);
}
BENCHMARK(BM_BellIndexOracle)->Arg(2)->Arg(5)->Arg(7);

void BM_DenseTwoCopyOracle(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(qkd::dense_two_copy_oracle(kState).p_succ);
}
BENCHMARK(BM_DenseTwoCopyOracle);

// One worst-case BB84 grid point; the dominant cost of region scans.
void BM_AdRateBb84Point(benchmark::State& state) {
  const int b = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        qkd::ad_rate_bb84(0.08, 0.12, {qkd::Basis::Z, b, 1.0}).rate);
}
BENCHMARK(BM_AdRateBb84Point)->Arg(2)->Arg(7);

void BM_RunAdMc(benchmark::State& state) {
  qkd::McConfig cfg;
  cfg.q = 0.1;
  cfg.blocks = static_cast<std::uint64_t>(state.range(0));
  cfg.b = 2;
  cfg.seed = 42;
  for (auto _ : state) benchmark::DoNotOptimize(qkd::run_ad_mc(cfg).accepted);
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(cfg.blocks));
}
BENCHMARK(BM_RunAdMc)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
