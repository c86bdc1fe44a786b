// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "mapkit/mapping.hpp"

namespace {

using namespace mapkit;

CommMatrix sparse_matrix(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution edge(0.2);
    std::uniform_int_distribution<int> weight(1, 1000);
    CommMatrix m(n, MatrixKind::volume);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && edge(rng)) m.set(i, j, weight(rng));
    return m;
}

void BM_Mapping(benchmark::State& state) {
    const auto algorithm = static_cast<Algorithm>(state.range(0));
    const auto topology = Topology::build(TopologyKind::torus, Dims{4, 4, 4});
    const CommMatrix m = sparse_matrix(64, 1);
    for (auto _ : state) benchmark::DoNotOptimize(generate_mapping(algorithm, &m, topology));
    state.SetLabel(std::string(to_string(algorithm)));
}

void all_algorithm_args(benchmark::internal::Benchmark* b) {
    for (Algorithm a : all_algorithms()) b->Arg(static_cast<int>(a));
}

BENCHMARK(BM_Mapping)->Apply(all_algorithm_args)->Unit(benchmark::kMicrosecond);

}  // namespace
