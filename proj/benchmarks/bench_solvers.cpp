#include "bwmin/eval_harness.hpp"
#include "bwmin/oracle.hpp"
#include "bwmin/solvers.hpp"

#include <benchmark/benchmark.h>

using namespace bwmin;

namespace {

FlowSet scenario_flows(std::uint64_t seed) { return sample_flows(scenario_by_name("d33"), trial_seed(7, seed)); }

void BM_MinBwEdf(benchmark::State& state) {
    const FlowSet fs = scenario_flows(1);
    for (auto _ : state) benchmark::DoNotOptimize(min_bw_edf(fs).r_min);
}
BENCHMARK(BM_MinBwEdf);

void BM_MinBwSpShaped(benchmark::State& state) {
    const FlowSet fs = scenario_flows(2);
    for (auto _ : state) benchmark::DoNotOptimize(min_bw_sp_shaped(fs).r_min);
}
BENCHMARK(BM_MinBwSpShaped);

// Ten flows: each feasibility test walks the three-way enumeration.
void BM_MinBwFifoShaped(benchmark::State& state) {
    const FlowSet fs = scenario_flows(3);
    for (auto _ : state) benchmark::DoNotOptimize(min_bw_fifo_shaped(fs).r_min);
}
BENCHMARK(BM_MinBwFifoShaped)->Unit(benchmark::kMillisecond);

void BM_ScenarioTrial(benchmark::State& state) {
    const auto& sc = scenario_by_name("d23");
    std::uint64_t t = 0;
    for (auto _ : state) benchmark::DoNotOptimize(all_minima(sample_flows(sc, trial_seed(1, t++))).fifo_shaped);
}
BENCHMARK(BM_ScenarioTrial)->Unit(benchmark::kMillisecond);

void BM_SimulateTwoFlowFifoShaped(benchmark::State& state) {
    const FlowSet fs({{1, 5, 1.4}, {4, 5, 1.25}});
    const auto res = min_bw_fifo_shaped(fs);
    const auto cfg = default_sim_config(fs, res.r_min, SchedulerKind::FifoShaped, res.plan);
    for (auto _ : state) benchmark::DoNotOptimize(simulate(fs, res.r_min, cfg, ArrivalPattern::synchronized(2)));
}
BENCHMARK(BM_SimulateTwoFlowFifoShaped)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
