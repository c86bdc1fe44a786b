// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

// Greedy and isomorphism-style communication/topology-aware mappers. All of
// them operate on W = M + M^T and break ties toward the smallest rank and the
// smallest node id so results depend only on (matrix, topology, seed).

#include <algorithm>
#include <limits>
#include <numeric>

#include "internal.hpp"
#include "mapkit/mapping.hpp"

namespace mapkit {
namespace {

using detail::Affinity;

constexpr int kUnmapped = -1;

// Incremental placement state shared by the constructive mappers.
class Placement {
public:
    Placement(const Affinity& w, const Topology& topology)
        : w_(w),
          topology_(topology),
          dist_(topology),
          n_(topology.node_count()),
          node_of_(static_cast<std::size_t>(n_), kUnmapped),
          rank_on_(static_cast<std::size_t>(n_), kUnmapped),
          to_mapped_(static_cast<std::size_t>(n_), 0.0),
          near_mapped_(static_cast<std::size_t>(n_), std::numeric_limits<int>::max()) {}

    int n() const { return n_; }
    const DistanceTable& dist() const { return dist_; }
    bool mapped(int rank) const { return node_of_[static_cast<std::size_t>(rank)] != kUnmapped; }
    bool free(NodeId node) const { return rank_on_[static_cast<std::size_t>(node)] == kUnmapped; }
    NodeId node_of(int rank) const { return node_of_[static_cast<std::size_t>(rank)]; }
    double to_mapped(int rank) const { return to_mapped_[static_cast<std::size_t>(rank)]; }
    int placed() const { return placed_; }
    bool done() const { return placed_ == n_; }

    /// Hop distance from `node` to the closest occupied node.
    int near_mapped(NodeId node) const { return near_mapped_[static_cast<std::size_t>(node)]; }

    void place(int rank, NodeId node) {
        node_of_[static_cast<std::size_t>(rank)] = node;
        rank_on_[static_cast<std::size_t>(node)] = rank;
        ++placed_;
        for (int v : w_.partners[static_cast<std::size_t>(rank)]) {
            to_mapped_[static_cast<std::size_t>(v)] += w_(v, rank);
        }
        for (NodeId q = 0; q < n_; ++q) {
            near_mapped_[static_cast<std::size_t>(q)] =
                std::min(near_mapped_[static_cast<std::size_t>(q)], dist_(q, node));
        }
    }

    /// Unmapped rank with the largest weight to the mapped set; ties to the
    /// smallest rank. Returns -1 when everything is mapped.
    int most_attached() const {
        int best = -1;
        for (int r = 0; r < n_; ++r) {
            if (mapped(r)) continue;
            if (best < 0 || to_mapped(r) > to_mapped(best)) best = r;
        }
        return best;
    }

    /// Unmapped rank with the largest total weight; ties to the smallest rank.
    int heaviest_unmapped() const {
        int best = -1;
        for (int r = 0; r < n_; ++r) {
            if (mapped(r)) continue;
            if (best < 0 || w_.total[static_cast<std::size_t>(r)] >
                                w_.total[static_cast<std::size_t>(best)]) {
                best = r;
            }
        }
        return best;
    }

    /// sum_u W[rank][u] * d(node, node_of(u)) over mapped partners u.
    double placement_cost(int rank, NodeId node) const {
        double cost = 0.0;
        for (int u : w_.partners[static_cast<std::size_t>(rank)]) {
            if (!mapped(u)) continue;
            cost += w_(rank, u) * dist_(node, node_of(u));
        }
        return cost;
    }

    /// Free node closest to `anchor`; ties to the smallest id.
    NodeId nearest_free(NodeId anchor) const {
        NodeId best = kUnmapped;
        for (NodeId q = 0; q < n_; ++q) {
            if (!free(q)) continue;
            if (best == kUnmapped || dist_(anchor, q) < dist_(anchor, best)) best = q;
        }
        return best;
    }

    /// Free node closest to any occupied node; ties to the smallest id.
    NodeId nearest_free_to_set() const {
        NodeId best = kUnmapped;
        for (NodeId q = 0; q < n_; ++q) {
            if (!free(q)) continue;
            if (best == kUnmapped || near_mapped(q) < near_mapped(best)) best = q;
        }
        return best;
    }

    Mapping finish(std::string algorithm, MatrixKind kind,
                   std::optional<std::uint64_t> seed) const {
        return Mapping(node_of_, topology_.kind(), topology_.dims(),
                       MappingMeta{std::move(algorithm), kind, seed});
    }

private:
    const Affinity& w_;
    const Topology& topology_;
    DistanceTable dist_;
    int n_;
    std::vector<NodeId> node_of_;
    std::vector<int> rank_on_;
    std::vector<double> to_mapped_;
    std::vector<int> near_mapped_;
    int placed_ = 0;
};

NodeId min_distance_sum_node(const DistanceTable& dist) {
    NodeId best = 0;
    long long best_sum = dist.distance_sum(0);
    for (NodeId q = 1; q < dist.size(); ++q) {
        const long long s = dist.distance_sum(q);
        if (s < best_sum) {
            best = q;
            best_sum = s;
        }
    }
    return best;
}

NodeId random_node(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return static_cast<NodeId>(detail::uniform_below(rng, static_cast<std::uint64_t>(n)));
}

}  // namespace

int bokhari_cardinality(const CommMatrix& m, const Mapping& mapping, const Topology& topology) {
    detail::require_matching_size(m, topology, "bokhari");
    if (mapping.size() != m.size()) {
        throw InputError("bokhari: mapping size does not match matrix");
    }
    int card = 0;
    for (int i = 0; i < m.size(); ++i) {
        for (int j = i + 1; j < m.size(); ++j) {
            if (m.symmetric(i, j) > 0.0 &&
                topology.distance(mapping.node_of(i), mapping.node_of(j)) == 1) {
                ++card;
            }
        }
    }
    return card;
}

Mapping map_bokhari(const CommMatrix& m, const Topology& topology, const Mapping& initial,
                    int max_outer, std::uint64_t seed) {
    detail::require_matching_size(m, topology, "bokhari");
    if (initial.size() != m.size() || initial.dims() != topology.dims()) {
        throw InputError("bokhari: initial mapping does not match the topology");
    }
    const int n = m.size();
    const Affinity w(m);
    const DistanceTable dist(topology);
    auto adj = [&](NodeId a, NodeId b) { return dist(a, b) == 1 ? 1 : 0; };

    std::vector<NodeId> current(initial.assignment().begin(), initial.assignment().end());

    auto cardinality = [&](const std::vector<NodeId>& place) {
        int card = 0;
        for (int i = 0; i < n; ++i) {
            for (int j : w.partners[static_cast<std::size_t>(i)]) {
                if (j > i) card += adj(place[static_cast<std::size_t>(i)], place[static_cast<std::size_t>(j)]);
            }
        }
        return card;
    };
    auto swap_gain = [&](const std::vector<NodeId>& place, int a, int b) {
        const NodeId pa = place[static_cast<std::size_t>(a)];
        const NodeId pb = place[static_cast<std::size_t>(b)];
        int gain = 0;
        for (int u : w.partners[static_cast<std::size_t>(a)]) {
            if (u == b) continue;
            const NodeId pu = place[static_cast<std::size_t>(u)];
            gain += adj(pb, pu) - adj(pa, pu);
        }
        for (int u : w.partners[static_cast<std::size_t>(b)]) {
            if (u == a) continue;
            const NodeId pu = place[static_cast<std::size_t>(u)];
            gain += adj(pa, pu) - adj(pb, pu);
        }
        return gain;
    };
    // Steepest ascent over all pairwise interchanges.
    auto climb = [&](std::vector<NodeId>& place) {
        while (true) {
            int best_gain = 0;
            int best_a = -1;
            int best_b = -1;
            for (int a = 0; a < n; ++a) {
                for (int b = a + 1; b < n; ++b) {
                    const int g = swap_gain(place, a, b);
                    if (g > best_gain) {
                        best_gain = g;
                        best_a = a;
                        best_b = b;
                    }
                }
            }
            if (best_gain <= 0) return;
            std::swap(place[static_cast<std::size_t>(best_a)], place[static_cast<std::size_t>(best_b)]);
        }
    };

    std::vector<NodeId> best = current;
    int best_card = cardinality(best);
    std::mt19937_64 rng(seed);
    for (int outer = 0; outer < max_outer; ++outer) {
        climb(current);
        const int card = cardinality(current);
        if (card <= best_card) break;
        best = current;
        best_card = card;
        // Jump: perturb the best mapping before climbing again.
        current = best;
        for (int s = 0; s < n / 4; ++s) {
            const auto a = detail::uniform_below(rng, static_cast<std::uint64_t>(n));
            const auto b = detail::uniform_below(rng, static_cast<std::uint64_t>(n));
            std::swap(current[a], current[b]);
        }
    }
    return Mapping(std::move(best), topology.kind(), topology.dims(),
                   MappingMeta{"bokhari", m.kind(), seed});
}

Mapping map_topo_aware(const CommMatrix& m, const Topology& topology) {
    detail::require_matching_size(m, topology, "topo-aware");
    const Affinity w(m);
    Placement pl(w, topology);
    pl.place(w.heaviest(), min_distance_sum_node(pl.dist()));
    while (!pl.done()) {
        const int t = pl.most_attached();
        NodeId best = kUnmapped;
        double best_cost = 0.0;
        for (NodeId q = 0; q < pl.n(); ++q) {
            if (!pl.free(q)) continue;
            const double c = pl.placement_cost(t, q);
            if (best == kUnmapped || c < best_cost) {
                best = q;
                best_cost = c;
            }
        }
        pl.place(t, best);
    }
    return pl.finish("topo-aware", m.kind(), std::nullopt);
}

Mapping map_pacmap(const CommMatrix& m, const Topology& topology) {
    detail::require_matching_size(m, topology, "pacmap");
    const Affinity w(m);
    Placement pl(w, topology);
    pl.place(w.heaviest(), min_distance_sum_node(pl.dist()));
    while (!pl.done()) {
        const int p = pl.most_attached();
        // Frontier: free nodes touching the allocation.
        NodeId best = kUnmapped;
        double best_cost = 0.0;
        for (NodeId q = 0; q < pl.n(); ++q) {
            if (!pl.free(q) || pl.near_mapped(q) != 1) continue;
            const double c = pl.placement_cost(p, q);
            if (best == kUnmapped || c < best_cost) {
                best = q;
                best_cost = c;
            }
        }
        if (best == kUnmapped) best = pl.nearest_free_to_set();
        pl.place(p, best);
    }
    return pl.finish("pacmap", m.kind(), std::nullopt);
}

Mapping map_greedy(const CommMatrix& m, const Topology& topology, std::uint64_t seed) {
    detail::require_matching_size(m, topology, "greedy");
    const Affinity w(m);
    Placement pl(w, topology);
    const int n = pl.n();
    std::vector<Coord> coords(static_cast<std::size_t>(n));
    for (NodeId q = 0; q < n; ++q) coords[static_cast<std::size_t>(q)] = topology.coord(q);

    pl.place(w.heaviest(), random_node(n, seed));
    while (!pl.done()) {
        int p = pl.most_attached();
        if (pl.to_mapped(p) <= 0.0) p = pl.heaviest_unmapped();

        // Weighted centroid of p's mapped partners, or of the whole mapped
        // set when p has none.
        double cx = 0.0, cy = 0.0, cz = 0.0, total = 0.0;
        for (int u : w.partners[static_cast<std::size_t>(p)]) {
            if (!pl.mapped(u)) continue;
            const Coord& c = coords[static_cast<std::size_t>(pl.node_of(u))];
            const double wt = w(p, u);
            cx += wt * c.x;
            cy += wt * c.y;
            cz += wt * c.z;
            total += wt;
        }
        if (total <= 0.0) {
            for (int r = 0; r < n; ++r) {
                if (!pl.mapped(r)) continue;
                const Coord& c = coords[static_cast<std::size_t>(pl.node_of(r))];
                cx += c.x;
                cy += c.y;
                cz += c.z;
                total += 1.0;
            }
        }
        cx /= total;
        cy /= total;
        cz /= total;

        NodeId best = kUnmapped;
        double best_d = 0.0;
        for (NodeId q = 0; q < n; ++q) {
            if (!pl.free(q)) continue;
            const Coord& c = coords[static_cast<std::size_t>(q)];
            const double d = (c.x - cx) * (c.x - cx) + (c.y - cy) * (c.y - cy) +
                             (c.z - cz) * (c.z - cz);
            if (best == kUnmapped || d < best_d) {
                best = q;
                best_d = d;
            }
        }
        pl.place(p, best);
    }
    return pl.finish("greedy", m.kind(), seed);
}

Mapping map_fhgreedy(const CommMatrix& m, const Topology& topology, std::uint64_t seed) {
    detail::require_matching_size(m, topology, "fhgreedy");
    const Affinity w(m);
    Placement pl(w, topology);
    const int n = pl.n();

    std::vector<int> queue;
    std::size_t head = 0;
    NodeId last = random_node(n, seed);
    const int first = w.heaviest();
    pl.place(first, last);
    queue.push_back(first);

    while (!pl.done()) {
        if (head == queue.size()) {
            // Disconnected remainder: restart next to the last placement.
            const int p = pl.heaviest_unmapped();
            last = pl.nearest_free(last);
            pl.place(p, last);
            queue.push_back(p);
        }
        const int u = queue[head++];
        const NodeId at = pl.node_of(u);

        std::vector<int> nbrs;
        for (int v : w.partners[static_cast<std::size_t>(u)]) {
            if (!pl.mapped(v)) nbrs.push_back(v);
        }
        std::stable_sort(nbrs.begin(), nbrs.end(),
                         [&](int a, int b) { return w(u, a) > w(u, b); });

        std::vector<NodeId> free_nodes;
        for (NodeId q = 0; q < n; ++q) {
            if (pl.free(q)) free_nodes.push_back(q);
        }
        std::stable_sort(free_nodes.begin(), free_nodes.end(), [&](NodeId a, NodeId b) {
            return pl.dist()(at, a) < pl.dist()(at, b);
        });

        for (std::size_t i = 0; i < nbrs.size() && i < free_nodes.size(); ++i) {
            pl.place(nbrs[i], free_nodes[i]);
            queue.push_back(nbrs[i]);
            last = free_nodes[i];
        }
    }
    return pl.finish("fhgreedy", m.kind(), seed);
}

Mapping map_greedy_allc(const CommMatrix& m, const Topology& topology) {
    detail::require_matching_size(m, topology, "greedy-allc");
    const Affinity w(m);
    Placement pl(w, topology);
    const int n = pl.n();

    NodeId hub = 0;
    for (NodeId q = 1; q < n; ++q) {
        if (topology.degree(q) > topology.degree(hub)) hub = q;
    }
    pl.place(w.heaviest(), hub);

    struct Pair {
        int a;
        int b;
        double weight;
    };
    std::vector<Pair> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j : w.partners[static_cast<std::size_t>(i)]) {
            if (j > i) pairs.push_back(Pair{i, j, w(i, j)});
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Pair& x, const Pair& y) { return x.weight > y.weight; });

    for (const Pair& pr : pairs) {
        if (pl.done()) break;
        const bool ma = pl.mapped(pr.a);
        const bool mb = pl.mapped(pr.b);
        if (ma && mb) continue;
        if (ma || mb) {
            const int anchor = ma ? pr.a : pr.b;
            const int other = ma ? pr.b : pr.a;
            pl.place(other, pl.nearest_free(pl.node_of(anchor)));
            continue;
        }
        const auto ta = w.total[static_cast<std::size_t>(pr.a)];
        const auto tb = w.total[static_cast<std::size_t>(pr.b)];
        const int lead = tb > ta ? pr.b : pr.a;
        const int follow = lead == pr.a ? pr.b : pr.a;
        const NodeId x = pl.nearest_free_to_set();
        pl.place(lead, x);
        pl.place(follow, pl.nearest_free(x));
    }
    for (int r = 0; r < n; ++r) {
        if (!pl.mapped(r)) pl.place(r, pl.nearest_free_to_set());
    }
    return pl.finish("greedy-allc", m.kind(), std::nullopt);
}

}  // namespace mapkit
