// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "mapkit/mapping.hpp"
#include "mapkit/simkernel.hpp"
#include "mapkit/trace.hpp"

namespace {

using namespace mapkit;

void BM_Simulate(benchmark::State& state) {
    const auto pattern = static_cast<TracePattern>(state.range(0));
    const auto topology = Topology::build(TopologyKind::torus, Dims{4, 4, 4});
    TraceParams params;
    params.iters = 8;
    const Trace trace = gen_trace(pattern, 64, params, 42);
    const Mapping mapping = sfc_map(Curve::hilbert, topology);
    for (auto _ : state) benchmark::DoNotOptimize(simulate(trace, mapping, topology));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trace.message_count()));
    state.SetLabel(std::string(to_string(pattern)));
}

BENCHMARK(BM_Simulate)
    ->Arg(static_cast<int>(TracePattern::ring))
    ->Arg(static_cast<int>(TracePattern::stencil7))
    ->Arg(static_cast<int>(TracePattern::random_sparse))
    ->Arg(static_cast<int>(TracePattern::cg_like))
    ->Unit(benchmark::kMicrosecond);

}  // namespace
