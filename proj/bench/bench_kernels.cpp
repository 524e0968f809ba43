// Serial reference kernels against their OpenMP counterparts on one
// mid-size generated instance. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "alliance/config.hpp"
#include "alliance/greedy.hpp"
#include "alliance/instance.hpp"
#include "alliance/metrics.hpp"
#include "alliance/sampling.hpp"

namespace {

using namespace alliance;

const MultiAttributeGraph& graph() {
  static const MultiAttributeGraph g = [] {
    GeneratorSpec s;
    s.n_airports = 400;
    s.n_segment_records = 20000;
    s.n_carriers = 60;
    s.seed = 1;
    return generate_instance(s);
  }();
  return g;
}

SamplingConfig sampling() {
  SamplingConfig c;
  c.n_walks = 50;
  c.walk_length = 3;
  c.n_segment_samples = 100;
  c.seed = 3;
  return c;
}

const Realization& realization() {
  static const Realization r = draw_realization(graph(), sampling());
  return r;
}

AlliancePartition partition() { return baseline_partition(graph().carrier_count(), 5, 1); }

void BM_Walks_Reference(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(reference::run_walks(graph(), sampling()));
}
void BM_Walks_Parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(run_walks(graph(), sampling()));
}
void BM_Segments_Reference(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(reference::sample_segments(graph(), sampling()));
}
void BM_Segments_Parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(sample_segments(graph(), sampling()));
}
void BM_Hhi_Reference(benchmark::State& st) {
  const auto p = partition();
  for (auto _ : st) benchmark::DoNotOptimize(reference::hhi_segments_estimate(realization().segments, p));
}
void BM_Hhi_Parallel(benchmark::State& st) {
  const auto p = partition();
  for (auto _ : st) benchmark::DoNotOptimize(hhi_segments_estimate(realization().segments, p));
}
void BM_Mpc_Reference(benchmark::State& st) {
  const auto p = partition();
  for (auto _ : st) benchmark::DoNotOptimize(reference::mpc_estimate(realization().walks, p));
}
void BM_Mpc_Parallel(benchmark::State& st) {
  const auto p = partition();
  for (auto _ : st) benchmark::DoNotOptimize(mpc_estimate(realization().walks, p));
}
void BM_Greedy_Incremental(benchmark::State& st) {
  const auto& r = realization();
  for (auto _ : st) {
    benchmark::DoNotOptimize(greedy_partition(r, graph().carrier_count(), graph().segment_count(), 0.7, 0.3));
  }
}

}  // namespace

BENCHMARK(BM_Walks_Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Walks_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Segments_Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Segments_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hhi_Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Hhi_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Mpc_Reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Mpc_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Greedy_Incremental)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
