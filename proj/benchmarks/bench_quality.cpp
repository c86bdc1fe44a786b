// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "mapkit/quality.hpp"

namespace {

using namespace mapkit;

void BM_Dilation(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const auto topology = Topology::build(TopologyKind::haec_box, Dims{side, side, side});
    const int n = topology.node_count();
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> weight(0, 100);
    CommMatrix m(n, MatrixKind::count);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) m.set(i, j, weight(rng));
    const Mapping mapping = sfc_map(Curve::hilbert, topology);
    for (auto _ : state) benchmark::DoNotOptimize(dilation(m, mapping, topology));
    state.SetItemsProcessed(state.iterations() * n * n);
}

BENCHMARK(BM_Dilation)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

}  // namespace
