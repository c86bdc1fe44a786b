// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mapkit/comm.hpp"
#include "mapkit/error.hpp"
#include "mapkit/topology.hpp"

namespace mapkit::detail {

// Uniform integer in [0, bound). std::uniform_int_distribution is
// implementation-defined, which would break cross-platform reproducibility.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % bound;
}

/// Symmetrized weights W = M + M^T plus per-process partner lists.
struct Affinity {
    int n = 0;
    std::vector<double> w;
    std::vector<std::vector<int>> partners;  // ascending, W > 0, no self
    std::vector<double> total;               // row sums of W

    explicit Affinity(const CommMatrix& m) : n(m.size()) {
        w.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
        partners.resize(static_cast<std::size_t>(n));
        total.assign(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const double v = m.symmetric(i, j);
                w[idx(i, j)] = v;
                total[static_cast<std::size_t>(i)] += v;
                if (v > 0.0) partners[static_cast<std::size_t>(i)].push_back(j);
            }
        }
    }

    double operator()(int i, int j) const { return w[idx(i, j)]; }

    /// Process with the largest total; ties to the smallest rank.
    int heaviest() const {
        int best = 0;
        for (int i = 1; i < n; ++i) {
            if (total[static_cast<std::size_t>(i)] > total[static_cast<std::size_t>(best)]) best = i;
        }
        return best;
    }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
               static_cast<std::size_t>(j);
    }
};

inline void require_matching_size(const CommMatrix& m, const Topology& topology,
                                  const char* algorithm) {
    if (m.size() != topology.node_count()) {
        throw InputError(std::string(algorithm) + ": matrix has " + std::to_string(m.size()) +
                         " processes but topology has " + std::to_string(topology.node_count()) +
                         " nodes");
    }
}

}  // namespace mapkit::detail
