// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mapkit {

enum class TopologyKind { mesh, torus, haec_box };
enum class LinkKind { optical, wireless };

std::string_view to_string(TopologyKind kind);
std::string_view to_string(LinkKind kind);

/// Accepts "mesh", "torus", "haec" and "haec_box".
TopologyKind parse_topology_kind(std::string_view name);

using NodeId = int;

struct Coord {
    int x = 0;
    int y = 0;
    int z = 0;

    friend bool operator==(const Coord&, const Coord&) = default;
};

struct Dims {
    int x = 1;
    int y = 1;
    int z = 1;

    int volume() const { return x * y * z; }
    int max_side() const;

    friend bool operator==(const Dims&, const Dims&) = default;
};

/// Parses "X,Y,Z".
Dims parse_dims(std::string_view text);
std::string to_string(Dims dims);  // "4x4x4"

struct LinkSpec {
    LinkKind kind = LinkKind::optical;
    double bandwidth = 0.0;       // bit/s
    double latency = 0.0;         // s
    double bit_error_rate = 0.0;  // per bit

    void validate() const;

    friend bool operator==(const LinkSpec&, const LinkSpec&) = default;
};

// Defaults are the future-generation link characteristics:
// wireless 100 Gbit/s, 100 ps, BER 1e-8; optical 250 Gbit/s, 10 ps, BER 1e-12.
struct LinkTable {
    LinkSpec optical{LinkKind::optical, 250e9, 10e-12, 1e-12};
    LinkSpec wireless{LinkKind::wireless, 100e9, 100e-12, 1e-8};

    const LinkSpec& operator[](LinkKind kind) const {
        return kind == LinkKind::optical ? optical : wireless;
    }

    friend bool operator==(const LinkTable&, const LinkTable&) = default;
};

struct Hop {
    NodeId from = 0;
    NodeId to = 0;
    LinkSpec link;
};

struct Route {
    std::vector<Hop> hops;

    std::size_t size() const { return hops.size(); }
    bool empty() const { return hops.empty(); }
};

/// Immutable 3-D direct network. Node ids are x + dx*y + dx*dy*z.
///
/// mesh and torus use XYZ dimension-order routing over optical links (torus
/// takes the shorter wrap direction, ties toward increasing coordinate).
/// haec_box stacks dz boards, each a dx*dy 2-D optical torus. Boards are
/// connected by wireless links: with `wireless_full` every node reaches every
/// node of any other board, otherwise only nodes of adjacent boards (no
/// wraparound in z). Cross-board routes first hop onto the neighboring board
/// (or the destination board when fully connected) at the destination's
/// (x, y), then continue along z.
class Topology {
public:
    static Topology build(TopologyKind kind, Dims dims, const LinkTable& links = {},
                          bool wireless_full = false);

    TopologyKind kind() const { return kind_; }
    Dims dims() const { return dims_; }
    const LinkTable& link_table() const { return links_; }
    bool wireless_full() const { return wireless_full_; }

    int node_count() const { return dims_.volume(); }
    std::size_t link_count() const { return link_count_; }  // directed

    bool contains(Coord c) const;
    NodeId node_id(Coord c) const;
    Coord coord(NodeId id) const;

    int distance(Coord a, Coord b) const;
    int distance(NodeId a, NodeId b) const { return distance(coord(a), coord(b)); }

    Route route(Coord a, Coord b) const;
    Route route(NodeId a, NodeId b) const { return route(coord(a), coord(b)); }

    /// Sorted ascending.
    std::span<const NodeId> neighbors(NodeId id) const;
    int degree(NodeId id) const { return static_cast<int>(neighbors(id).size()); }
    std::optional<LinkSpec> link(NodeId from, NodeId to) const;

    int diameter() const;

    /// e.g. "torus-4x4x4", "haec-4x4x4-full"
    std::string label() const;

private:
    Topology() = default;

    void check(Coord c) const;
    LinkKind link_kind(Coord a, Coord b) const;

    TopologyKind kind_ = TopologyKind::mesh;
    Dims dims_;
    LinkTable links_;
    bool wireless_full_ = false;
    std::vector<std::vector<NodeId>> adjacency_;
    std::size_t link_count_ = 0;
};

/// Dense all-pairs hop distance table.
class DistanceTable {
public:
    explicit DistanceTable(const Topology& topology);

    int operator()(NodeId a, NodeId b) const {
        return table_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) +
                      static_cast<std::size_t>(b)];
    }
    int size() const { return n_; }

    /// Sum of distances from `a` to every node.
    long long distance_sum(NodeId a) const;

private:
    int n_ = 0;
    std::vector<int> table_;
};

}  // namespace mapkit
