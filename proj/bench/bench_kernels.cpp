/*
   Copyright 2026 The ICIC Lab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Serial reference against the OpenMP kernels. Both routes give identical
// estimates, so the only thing measured here is throughput.

#include "icic/coordinator.hpp"
#include "icic/experiments.hpp"
#include "icic/mc_simulator.hpp"
#include "icic/network_model.hpp"
#include "icic/rate_engine.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace icic;

Execution mode(const benchmark::State& state)
{
    return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void set_label(benchmark::State& state)
{
    state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}

void BM_ErgodicBatch3Cell(benchmark::State& state)
{
    PlacementSpec spec;
    spec.mode = PlacementSpec::Mode::random_shadow;
    const BuiltScenario b = build_scenario(Layout::three_cell, spec, 10.0, 3.7, 4, 1);
    const auto profiles = enumerate_profiles(b.budget, 4);
    McConfig mc;
    mc.trials = 20000;
    mc.execution = mode(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc_ergodic_batch(b.budget, 4, profiles, nullptr, mc));
    }
    state.SetItemsProcessed(state.iterations() * mc.trials);
    set_label(state);
}
BENCHMARK(BM_ErgodicBatch3Cell)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ErgodicLimitedFeedback2Cell(benchmark::State& state)
{
    PlacementSpec spec;
    spec.users = {{-0.1, 0.0}, {0.4, 0.0}};
    const BuiltScenario b = build_scenario(Layout::two_cell, spec, 10.0, 3.7, 4, 1);
    const auto profiles = enumerate_profiles(b.budget, 4);
    const FeedbackConfig fb = FeedbackConfig::uniform(2, 10, 10);
    McConfig mc;
    mc.trials = 5000;
    mc.execution = mode(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc_ergodic_batch(b.budget, 4, profiles, &fb, mc));
    }
    state.SetItemsProcessed(state.iterations() * mc.trials);
    set_label(state);
}
BENCHMARK(BM_ErgodicLimitedFeedback2Cell)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SignalPowerSamples(benchmark::State& state)
{
    McConfig mc;
    mc.execution = mode(state);
    constexpr std::int64_t n = 100000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_signal_power(4, 2, n, mc));
    }
    state.SetItemsProcessed(state.iterations() * n);
    set_label(state);
}
BENCHMARK(BM_SignalPowerSamples)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_RvqLeakage(benchmark::State& state)
{
    McConfig mc;
    mc.execution = mode(state);
    constexpr std::int64_t n = 5000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_rvq_leakage(4, 10, n, mc));
    }
    state.SetItemsProcessed(state.iterations() * n);
    set_label(state);
}
BENCHMARK(BM_RvqLeakage)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

// Closed-form kernels, for scale against the simulator.
void BM_ClosedFormRateI3(benchmark::State& state)
{
    double g = 10.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(rate_i3(g, 2.0, 0.7, 3));
        g += 1e-9;
    }
}
BENCHMARK(BM_ClosedFormRateI3);

void BM_SelectJoint3Cell(benchmark::State& state)
{
    PlacementSpec spec;
    spec.mode = PlacementSpec::Mode::random_shadow;
    const BuiltScenario b = build_scenario(Layout::three_cell, spec, 10.0, 3.7, 4, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(select_joint(b.budget, 4));
    }
}
BENCHMARK(BM_SelectJoint3Cell);

} // namespace

BENCHMARK_MAIN();
