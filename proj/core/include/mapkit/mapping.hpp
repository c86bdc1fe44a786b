// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mapkit/comm.hpp"
#include "mapkit/topology.hpp"

namespace mapkit {

inline constexpr std::uint64_t kDefaultSeed = 42;

enum class Algorithm {
    peano,
    hilbert,
    gray,
    sweep,
    scan,
    bokhari,
    topo_aware,
    greedy,
    fhgreedy,
    greedy_allc,
    bipartition,
    pacmap,
};

/// All twelve, oblivious curves first.
std::span<const Algorithm> all_algorithms();

/// CLI identifiers: peano, hilbert, gray, sweep, scan, bokhari, topo-aware,
/// greedy, fhgreedy, greedy-allc, bipartition, pacmap.
std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

/// Space-filling curves ignore the communication matrix.
bool is_oblivious(Algorithm algorithm);
bool is_seeded(Algorithm algorithm);

struct MappingMeta {
    std::string algorithm;
    std::optional<MatrixKind> matrix;   // nullopt = no matrix used
    std::optional<std::uint64_t> seed;  // nullopt = seed-free

    friend bool operator==(const MappingMeta&, const MappingMeta&) = default;
};

/// Bijection rank -> node id on a specific topology shape.
class Mapping {
public:
    Mapping(std::vector<NodeId> assignment, TopologyKind kind, Dims dims, MappingMeta meta = {});

    int size() const { return static_cast<int>(assignment_.size()); }
    NodeId node_of(int rank) const { return assignment_[static_cast<std::size_t>(rank)]; }
    std::span<const NodeId> assignment() const { return assignment_; }

    /// node id -> rank
    std::vector<int> inverse() const;

    TopologyKind topology_kind() const { return kind_; }
    Dims dims() const { return dims_; }
    const MappingMeta& meta() const { return meta_; }
    void set_meta(MappingMeta meta) { meta_ = std::move(meta); }

    friend bool operator==(const Mapping&, const Mapping&) = default;

private:
    std::vector<NodeId> assignment_;
    TopologyKind kind_;
    Dims dims_;
    MappingMeta meta_;
};

// --- communication-oblivious ---------------------------------------------

enum class Curve { peano, hilbert, gray, sweep, scan };

/// Grid cells in curve order.
///   sweep   x fastest, then y, then z.
///   scan    boustrophedon: x reverses on every other row, y on every other plane.
///   hilbert power-of-two sides; generated on the enclosing cube and clipped.
///   gray    power-of-two sides; binary-reflected Gray code of the index with
///           bits dealt round-robin to x, y, z (least significant bit to x).
///   peano   any sides; serpentine base-3 curve on the enclosing 3^m cube, clipped.
std::vector<Coord> curve_order(Curve curve, Dims dims);

Mapping sfc_map(Curve curve, const Topology& topology);

// --- communication- and topology-aware -----------------------------------

/// Number of communicating pairs {i, j} (M[i][j] + M[j][i] > 0) placed on
/// adjacent nodes.
int bokhari_cardinality(const CommMatrix& m, const Mapping& mapping, const Topology& topology);

/// Pairwise-interchange hill climbing on cardinality with random restarts
/// (n/4 random swaps per jump). Never returns a mapping worse than `initial`.
Mapping map_bokhari(const CommMatrix& m, const Topology& topology, const Mapping& initial,
                    int max_outer = 16, std::uint64_t seed = kDefaultSeed);

Mapping map_topo_aware(const CommMatrix& m, const Topology& topology);
Mapping map_greedy(const CommMatrix& m, const Topology& topology,
                   std::uint64_t seed = kDefaultSeed);
Mapping map_fhgreedy(const CommMatrix& m, const Topology& topology,
                     std::uint64_t seed = kDefaultSeed);
Mapping map_greedy_allc(const CommMatrix& m, const Topology& topology);
Mapping map_bipartition(const CommMatrix& m, const Topology& topology);
Mapping map_pacmap(const CommMatrix& m, const Topology& topology);

/// Dispatches by algorithm. `matrix` may be null for oblivious algorithms and
/// is ignored by them when present. Bokhari starts from sweep.
Mapping generate_mapping(Algorithm algorithm, const CommMatrix* matrix, const Topology& topology,
                         std::uint64_t seed = kDefaultSeed);

// --- mapping files -------------------------------------------------------

/// "# algorithm=NAME", "# matrix=count|volume|none", "# seed=N|none", then one
/// "rank x y z" line per rank in ascending rank order.
void write_mapping(const Mapping& mapping, std::ostream& out);
void write_mapping(const Mapping& mapping, const std::filesystem::path& path);
std::string mapping_to_string(const Mapping& mapping);

Mapping read_mapping(std::istream& in, const Topology& topology,
                     std::string_view source = "<stream>");
Mapping read_mapping(const std::filesystem::path& path, const Topology& topology);

}  // namespace mapkit
