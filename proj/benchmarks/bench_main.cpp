// Copyright 2026 The usdkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "usdkit/analysis.hpp"
#include "usdkit/closedform.hpp"
#include "usdkit/montecarlo.hpp"

namespace {

using namespace usdkit;

EnsembleParams bench_params() {
    EnsembleParams p;
    p.r1 = 0.6;
    p.r2 = 0.7;
    p.s = 0.5;
    p.s_tilde = 0.4;
    p.s_prime = 0.45;
    p.s_tilde_prime = 0.35;
    return p;
}

void BM_BuildMixedPair(benchmark::State &state) {
    EnsembleParams p = bench_params();
    for (auto _ : state) benchmark::DoNotOptimize(build_mixed_pair(p));
}
BENCHMARK(BM_BuildMixedPair);

void BM_Fidelity16(benchmark::State &state) {
    EnsemblePair ens = build_mixed_pair(bench_params());
    for (auto _ : state) benchmark::DoNotOptimize(fidelity(ens.rho1, ens.rho2));
}
BENCHMARK(BM_Fidelity16);

void BM_AliceMeasurement(benchmark::State &state) {
    EnsembleParams p = bench_params();
    EnsemblePair ens = build_mixed_pair(p);
    MeasurementSchedule sched = MeasurementSchedule::symmetric(p.s, p.s_tilde);
    for (auto _ : state) benchmark::DoNotOptimize(alice_measurement(ens, sched));
}
BENCHMARK(BM_AliceMeasurement);

void BM_RunLocc(benchmark::State &state) {
    EnsembleParams p = bench_params();
    MeasurementSchedule a = MeasurementSchedule::symmetric(p.s, p.s_tilde);
    MeasurementSchedule b = MeasurementSchedule::symmetric(p.s_prime, p.s_tilde_prime);
    for (auto _ : state) benchmark::DoNotOptimize(run_locc(p, a, b));
}
BENCHMARK(BM_RunLocc);

void BM_OperationalLoccTrace(benchmark::State &state) {
    EnsembleParams p = bench_params();
    EnsemblePair ens = build_mixed_pair(p);
    ObserverMeasurement am = alice_measurement(ens, MeasurementSchedule::symmetric(p.s, p.s_tilde));
    ObserverMeasurement bm =
        bob_measurement(ens, MeasurementSchedule::symmetric(p.s_prime, p.s_tilde_prime));
    std::vector<Matrix> states{ens.rho1.matrix(), ens.rho2.matrix()};
    std::vector<double> priors{p.p1, p.p2()};
    std::vector<Stage> stages{{am.k1, am.k2, am.k0, Party::First},
                              {bm.k1, bm.k2, bm.k0, Party::Second}};
    std::vector<int> pattern{0, 0};
    for (auto _ : state)
        benchmark::DoNotOptimize(operational_probability(states, priors, stages, pattern));
}
BENCHMARK(BM_OperationalLoccTrace);

void BM_OptimalGlobalMixed(benchmark::State &state) {
    EnsembleParams p = bench_params();
    p.r1 = p.r2 = 0.6;
    for (auto _ : state) benchmark::DoNotOptimize(optimal_global_mixed(p));
}
BENCHMARK(BM_OptimalGlobalMixed);

void BM_GridSearchGlobalMixed(benchmark::State &state) {
    EnsembleParams p = bench_params();
    p.r1 = p.r2 = 0.6;
    for (auto _ : state) benchmark::DoNotOptimize(grid_search_global_mixed(p));
}
BENCHMARK(BM_GridSearchGlobalMixed);

void BM_QuarticRoot(benchmark::State &state) {
    for (auto _ : state) benchmark::DoNotOptimize(quartic_qstar(0.45, 0.55, 0.1));
}
BENCHMARK(BM_QuarticRoot);

void BM_CriticalOverlap(benchmark::State &state) {
    for (auto _ : state) benchmark::DoNotOptimize(critical_sc(0.45, 0.55));
}
BENCHMARK(BM_CriticalOverlap);

void BM_SsdDelta(benchmark::State &state) {
    for (auto _ : state) benchmark::DoNotOptimize(ssd_delta(0.5, 0.05));
}
BENCHMARK(BM_SsdDelta);

void BM_SampleLocc(benchmark::State &state) {
    ProtocolConfig cfg;
    cfg.protocol = "locc";
    cfg.params = bench_params();
    cfg.alice = MeasurementSchedule::symmetric(cfg.params.s, cfg.params.s_tilde);
    cfg.bob = MeasurementSchedule::symmetric(cfg.params.s_prime, cfg.params.s_tilde_prime);
    for (auto _ : state) benchmark::DoNotOptimize(sample_protocol(cfg, 100000, 1));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * 100000);
}
BENCHMARK(BM_SampleLocc);

} // namespace

BENCHMARK_MAIN();
