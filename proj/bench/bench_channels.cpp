// Copyright 2026 The spinjj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial versus OpenMP channel reconstruction. Run with OMP_NUM_THREADS set
// to the number of cores to see the parallel speedup.

#include <benchmark/benchmark.h>

#include "spinjj/gates.hpp"
#include "spinjj/metrics.hpp"

namespace {

using namespace spinjj;

void run_phase_gate(benchmark::State& state, ExecutionPolicy policy) {
    SystemParams base;
    base.n_max = static_cast<std::size_t>(state.range(0));
    const auto plan = plan_phase_gate(base, 0, 4.0);
    const auto p = apply_plan(base, plan);
    const auto model = build_lindblad(p, GateKind::PhaseGate);
    const auto layout = HilbertLayout::tripartite(p.n_max);
    ChannelOptions opts;
    opts.check_convergence = false;
    opts.policy = policy;
    for (auto _ : state) {
        auto ch = channel_from_simulation(model, plan.duration_ns, layout, true, opts);
        benchmark::DoNotOptimize(ch.superop.data());
    }
    state.counters["dim"] = static_cast<double>(layout.total_dim());
}

void run_swap_gate(benchmark::State& state, ExecutionPolicy policy) {
    const SystemParams p;
    const auto gate = swap_gate_exact(p);
    const auto model = build_lindblad(p, GateKind::SwapGate);
    ChannelOptions opts;
    opts.check_convergence = false;
    opts.policy = policy;
    for (auto _ : state) {
        auto ch = channel_from_simulation(model, gate.tau_k_ns, HilbertLayout::two_qubit(), false, opts);
        benchmark::DoNotOptimize(ch.superop.data());
    }
}

void BM_PhaseGateSerial(benchmark::State& s) { run_phase_gate(s, ExecutionPolicy::Serial); }
void BM_PhaseGateParallel(benchmark::State& s) { run_phase_gate(s, ExecutionPolicy::Parallel); }
void BM_SwapGateSerial(benchmark::State& s) { run_swap_gate(s, ExecutionPolicy::Serial); }
void BM_SwapGateParallel(benchmark::State& s) { run_swap_gate(s, ExecutionPolicy::Parallel); }

BENCHMARK(BM_PhaseGateSerial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PhaseGateParallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SwapGateSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SwapGateParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
