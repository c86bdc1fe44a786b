// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <deque>
#include <map>

#include "internal.hpp"
#include "mapkit/mapping.hpp"

namespace mapkit {
namespace {

using detail::Affinity;

constexpr int kMaxRefinementPasses = 8;

int axis(const Coord& c, int dim) { return dim == 0 ? c.x : (dim == 1 ? c.y : c.z); }

// Splits `nodes` in the middle of the bounding box's longest side (ties: x,
// then y, then z). The first half holds the lower coordinates.
std::pair<std::vector<NodeId>, std::vector<NodeId>> split_nodes(std::vector<NodeId> nodes,
                                                                const Topology& topology) {
    int lo[3] = {1 << 30, 1 << 30, 1 << 30};
    int hi[3] = {-1, -1, -1};
    for (NodeId q : nodes) {
        const Coord c = topology.coord(q);
        for (int d = 0; d < 3; ++d) {
            lo[d] = std::min(lo[d], axis(c, d));
            hi[d] = std::max(hi[d], axis(c, d));
        }
    }
    int dim = 0;
    for (int d = 1; d < 3; ++d) {
        if (hi[d] - lo[d] > hi[dim] - lo[dim]) dim = d;
    }
    std::stable_sort(nodes.begin(), nodes.end(), [&](NodeId a, NodeId b) {
        const int ca = axis(topology.coord(a), dim);
        const int cb = axis(topology.coord(b), dim);
        return ca != cb ? ca < cb : a < b;
    });
    const auto half = static_cast<std::ptrdiff_t>(nodes.size() / 2);
    return {std::vector<NodeId>(nodes.begin(), nodes.begin() + half),
            std::vector<NodeId>(nodes.begin() + half, nodes.end())};
}

// Balanced bisection of `procs` into parts of size `first_size` and the rest:
// greedy growth from the heaviest vertex, then Kernighan-Lin pair swaps.
std::pair<std::vector<int>, std::vector<int>> bisect(const std::vector<int>& procs,
                                                   std::size_t first_size, const Affinity& w) {
    const std::size_t k = procs.size();
    auto wt = [&](std::size_t a, std::size_t b) { return w(procs[a], procs[b]); };

    std::vector<double> internal(k, 0.0);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) internal[a] += wt(a, b);

    std::vector<char> side(k, 1);  // 0 = first part
    std::size_t seed = 0;
    for (std::size_t a = 1; a < k; ++a) {
        if (internal[a] > internal[seed]) seed = a;
    }
    std::vector<double> conn(k, 0.0);
    auto take = [&](std::size_t a) {
        side[a] = 0;
        for (std::size_t b = 0; b < k; ++b) conn[b] += wt(b, a);
    };
    take(seed);
    for (std::size_t grown = 1; grown < first_size; ++grown) {
        std::size_t best = k;
        for (std::size_t a = 0; a < k; ++a) {
            if (side[a] == 0) continue;
            if (best == k || conn[a] > conn[best] ||
                (conn[a] == conn[best] && internal[a] > internal[best])) {
                best = a;
            }
        }
        take(best);
    }

    for (int pass = 0; pass < kMaxRefinementPasses; ++pass) {
        // D = external - internal cost per vertex.
        std::vector<double> D(k, 0.0);
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                if (a == b) continue;
                D[a] += side[a] == side[b] ? -wt(a, b) : wt(a, b);
            }
        }
        std::vector<char> locked(k, 0);
        std::vector<std::pair<std::size_t, std::size_t>> swaps;
        std::vector<double> gains;
        const std::size_t steps = std::min(first_size, k - first_size);
        for (std::size_t s = 0; s < steps; ++s) {
            double best_gain = 0.0;
            std::size_t ba = k, bb = k;
            for (std::size_t a = 0; a < k; ++a) {
                if (locked[a] || side[a] != 0) continue;
                for (std::size_t b = 0; b < k; ++b) {
                    if (locked[b] || side[b] != 1) continue;
                    const double g = D[a] + D[b] - 2.0 * wt(a, b);
                    if (ba == k || g > best_gain) {
                        best_gain = g;
                        ba = a;
                        bb = b;
                    }
                }
            }
            locked[ba] = locked[bb] = 1;
            swaps.emplace_back(ba, bb);
            gains.push_back(best_gain);
            for (std::size_t x = 0; x < k; ++x) {
                if (locked[x]) continue;
                if (side[x] == 0) {
                    D[x] += 2.0 * wt(x, ba) - 2.0 * wt(x, bb);
                } else {
                    D[x] += 2.0 * wt(x, bb) - 2.0 * wt(x, ba);
                }
            }
        }
        double run = 0.0, best_run = 0.0;
        std::size_t best_prefix = 0;
        for (std::size_t i = 0; i < gains.size(); ++i) {
            run += gains[i];
            if (run > best_run) {
                best_run = run;
                best_prefix = i + 1;
            }
        }
        if (best_prefix == 0) break;
        for (std::size_t i = 0; i < best_prefix; ++i) {
            std::swap(side[swaps[i].first], side[swaps[i].second]);
        }
    }

    std::pair<std::vector<int>, std::vector<int>> parts;
    for (std::size_t a = 0; a < k; ++a) {
        (side[a] == 0 ? parts.first : parts.second).push_back(procs[a]);
    }
    return parts;
}

}  // namespace

Mapping map_bipartition(const CommMatrix& m, const Topology& topology) {
    detail::require_matching_size(m, topology, "bipartition");
    const int n = m.size();
    const Affinity w(m);
    const DistanceTable dist(topology);

    // Every process belongs to a region (node set) that shrinks as the
    // recursion proceeds; orientation choices look at the current regions of
    // processes outside the subproblem.
    std::vector<std::vector<NodeId>> regions;
    std::vector<int> region_of(static_cast<std::size_t>(n), 0);
    std::vector<NodeId> all_nodes(static_cast<std::size_t>(n));
    for (NodeId q = 0; q < n; ++q) all_nodes[static_cast<std::size_t>(q)] = q;
    regions.push_back(all_nodes);

    auto mean_distance = [&](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
        double s = 0.0;
        for (NodeId x : a)
            for (NodeId y : b) s += dist(x, y);
        return s / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
    };

    struct Task {
        std::vector<int> procs;
        int region;
    };
    std::deque<Task> work;
    std::vector<int> all_procs(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) all_procs[static_cast<std::size_t>(r)] = r;
    work.push_back(Task{all_procs, 0});

    std::vector<NodeId> assignment(static_cast<std::size_t>(n), -1);
    while (!work.empty()) {
        Task task = std::move(work.front());
        work.pop_front();
        const auto& nodes = regions[static_cast<std::size_t>(task.region)];
        if (task.procs.size() == 1) {
            assignment[static_cast<std::size_t>(task.procs.front())] = nodes.front();
            continue;
        }
        auto [half_a, half_b] = split_nodes(nodes, topology);
        auto [part_a, part_b] = bisect(task.procs, half_a.size(), w);

        // External weight of each part toward every other region.
        std::vector<char> inside(static_cast<std::size_t>(n), 0);
        for (int p : task.procs) inside[static_cast<std::size_t>(p)] = 1;
        auto external = [&](const std::vector<int>& part) {
            std::map<int, double> per_region;
            for (int p : part) {
                for (int q : w.partners[static_cast<std::size_t>(p)]) {
                    if (!inside[static_cast<std::size_t>(q)]) {
                        per_region[region_of[static_cast<std::size_t>(q)]] += w(p, q);
                    }
                }
            }
            return per_region;
        };
        const auto ext_a = external(part_a);
        const auto ext_b = external(part_b);
        auto cost = [&](const std::map<int, double>& ext, const std::vector<NodeId>& half) {
            double c = 0.0;
            for (const auto& [region, weight] : ext) {
                c += weight * mean_distance(half, regions[static_cast<std::size_t>(region)]);
            }
            return c;
        };
        // part_a -> half_a unless swapping the halves is strictly cheaper.
        // Sizes must match for the swap to be legal.
        if (half_a.size() == half_b.size()) {
            const double straight = cost(ext_a, half_a) + cost(ext_b, half_b);
            const double crossed = cost(ext_a, half_b) + cost(ext_b, half_a);
            if (crossed < straight) std::swap(half_a, half_b);
        }

        const int ra = static_cast<int>(regions.size());
        regions.push_back(std::move(half_a));
        const int rb = static_cast<int>(regions.size());
        regions.push_back(std::move(half_b));
        for (int p : part_a) region_of[static_cast<std::size_t>(p)] = ra;
        for (int p : part_b) region_of[static_cast<std::size_t>(p)] = rb;
        work.push_back(Task{std::move(part_a), ra});
        work.push_back(Task{std::move(part_b), rb});
    }
    return Mapping(std::move(assignment), topology.kind(), topology.dims(),
                   MappingMeta{"bipartition", m.kind(), std::nullopt});
}

}  // namespace mapkit
