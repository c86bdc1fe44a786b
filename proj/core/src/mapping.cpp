// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "mapkit/mapping.hpp"

#include <algorithm>
#include <array>

#include "mapkit/error.hpp"

namespace mapkit {
namespace {

constexpr std::array<Algorithm, 12> kAlgorithms = {
    Algorithm::peano,       Algorithm::hilbert,    Algorithm::gray,     Algorithm::sweep,
    Algorithm::scan,        Algorithm::bokhari,    Algorithm::topo_aware,
    Algorithm::greedy,      Algorithm::fhgreedy,   Algorithm::greedy_allc,
    Algorithm::bipartition, Algorithm::pacmap,
};

Curve curve_of(Algorithm a) {
    switch (a) {
        case Algorithm::peano: return Curve::peano;
        case Algorithm::hilbert: return Curve::hilbert;
        case Algorithm::gray: return Curve::gray;
        case Algorithm::sweep: return Curve::sweep;
        case Algorithm::scan: return Curve::scan;
        default: break;
    }
    throw InputError("not a space-filling curve: " + std::string(to_string(a)));
}

}  // namespace

std::span<const Algorithm> all_algorithms() { return kAlgorithms; }

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::peano: return "peano";
        case Algorithm::hilbert: return "hilbert";
        case Algorithm::gray: return "gray";
        case Algorithm::sweep: return "sweep";
        case Algorithm::scan: return "scan";
        case Algorithm::bokhari: return "bokhari";
        case Algorithm::topo_aware: return "topo-aware";
        case Algorithm::greedy: return "greedy";
        case Algorithm::fhgreedy: return "fhgreedy";
        case Algorithm::greedy_allc: return "greedy-allc";
        case Algorithm::bipartition: return "bipartition";
        case Algorithm::pacmap: return "pacmap";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name) {
    for (Algorithm a : kAlgorithms) {
        if (to_string(a) == name) return a;
    }
    // Spellings seen in the literature.
    if (name == "fggreedy" || name == "FHgreedy") return Algorithm::fhgreedy;
    if (name == "greedyALLC" || name == "greedy_allc") return Algorithm::greedy_allc;
    if (name == "topo_aware") return Algorithm::topo_aware;
    throw InputError("unknown algorithm '" + std::string(name) + "'");
}

bool is_oblivious(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::peano:
        case Algorithm::hilbert:
        case Algorithm::gray:
        case Algorithm::sweep:
        case Algorithm::scan:
            return true;
        default:
            return false;
    }
}

bool is_seeded(Algorithm algorithm) {
    return algorithm == Algorithm::bokhari || algorithm == Algorithm::greedy ||
           algorithm == Algorithm::fhgreedy;
}

Mapping::Mapping(std::vector<NodeId> assignment, TopologyKind kind, Dims dims, MappingMeta meta)
    : assignment_(std::move(assignment)), kind_(kind), dims_(dims), meta_(std::move(meta)) {
    const int n = dims_.volume();
    if (static_cast<int>(assignment_.size()) != n) {
        throw InputError("mapping has " + std::to_string(assignment_.size()) + " ranks, topology " +
                         to_string(dims_) + " has " + std::to_string(n) + " nodes");
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (std::size_t r = 0; r < assignment_.size(); ++r) {
        const NodeId node = assignment_[r];
        if (node < 0 || node >= n) {
            throw InputError("rank " + std::to_string(r) + " mapped to node id " +
                             std::to_string(node) + " outside [0, " + std::to_string(n) + ")");
        }
        if (seen[static_cast<std::size_t>(node)]) {
            throw InputError("mapping is not bijective: node " + std::to_string(node) +
                             " assigned twice");
        }
        seen[static_cast<std::size_t>(node)] = 1;
    }
}

std::vector<int> Mapping::inverse() const {
    std::vector<int> inv(assignment_.size(), -1);
    for (std::size_t r = 0; r < assignment_.size(); ++r) {
        inv[static_cast<std::size_t>(assignment_[r])] = static_cast<int>(r);
    }
    return inv;
}

Mapping sfc_map(Curve curve, const Topology& topology) {
    const auto cells = curve_order(curve, topology.dims());
    std::vector<NodeId> assignment;
    assignment.reserve(cells.size());
    for (const Coord& c : cells) assignment.push_back(topology.node_id(c));
    static constexpr std::array<std::string_view, 5> names = {"peano", "hilbert", "gray", "sweep",
                                                              "scan"};
    return Mapping(std::move(assignment), topology.kind(), topology.dims(),
                   MappingMeta{std::string(names[static_cast<std::size_t>(curve)]), std::nullopt,
                               std::nullopt});
}

Mapping generate_mapping(Algorithm algorithm, const CommMatrix* matrix, const Topology& topology,
                         std::uint64_t seed) {
    if (is_oblivious(algorithm)) {
        return sfc_map(curve_of(algorithm), topology);
    }
    if (matrix == nullptr) {
        throw InputError(std::string(to_string(algorithm)) + " needs a communication matrix");
    }
    const CommMatrix& m = *matrix;
    switch (algorithm) {
        case Algorithm::bokhari:
            return map_bokhari(m, topology, sfc_map(Curve::sweep, topology), 16, seed);
        case Algorithm::topo_aware: return map_topo_aware(m, topology);
        case Algorithm::greedy: return map_greedy(m, topology, seed);
        case Algorithm::fhgreedy: return map_fhgreedy(m, topology, seed);
        case Algorithm::greedy_allc: return map_greedy_allc(m, topology);
        case Algorithm::bipartition: return map_bipartition(m, topology);
        case Algorithm::pacmap: return map_pacmap(m, topology);
        default: break;
    }
    throw InputError("unhandled algorithm");
}

}  // namespace mapkit
