// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "mapkit/topology.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "mapkit/error.hpp"
#include "mapkit/format.hpp"

namespace mapkit {
namespace {

int sign(int v) { return (v > 0) - (v < 0); }

// Forward distance on a ring of `size` from a to b.
int ring_forward(int a, int b, int size) { return ((b - a) % size + size) % size; }

int ring_distance(int a, int b, int size) {
    const int f = ring_forward(a, b, size);
    return std::min(f, size - f);
}

// Direction (+1/-1/0) of the shorter way around the ring; ties go up.
int ring_direction(int a, int b, int size) {
    const int f = ring_forward(a, b, size);
    if (f == 0) return 0;
    return f <= size - f ? +1 : -1;
}

int wrap(int v, int size) { return ((v % size) + size) % size; }

int& axis(Coord& c, int dim) { return dim == 0 ? c.x : (dim == 1 ? c.y : c.z); }
int axis(const Dims& d, int dim) { return dim == 0 ? d.x : (dim == 1 ? d.y : d.z); }

}  // namespace

std::string_view to_string(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::mesh: return "mesh";
        case TopologyKind::torus: return "torus";
        case TopologyKind::haec_box: return "haec";
    }
    return "?";
}

std::string_view to_string(LinkKind kind) {
    return kind == LinkKind::optical ? "optical" : "wireless";
}

TopologyKind parse_topology_kind(std::string_view name) {
    if (name == "mesh") return TopologyKind::mesh;
    if (name == "torus") return TopologyKind::torus;
    if (name == "haec" || name == "haec_box" || name == "haec-box") return TopologyKind::haec_box;
    throw InputError("unknown topology '" + std::string(name) + "' (expected mesh, torus or haec)");
}

int Dims::max_side() const { return std::max({x, y, z}); }

Dims parse_dims(std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) {
        throw InputError("dims must be X,Y,Z, got '" + std::string(text) + "'");
    }
    int v[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        const auto p = trim(parts[static_cast<std::size_t>(i)]);
        auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v[i]);
        if (ec != std::errc{} || ptr != p.data() + p.size()) {
            throw InputError("dims must be X,Y,Z, got '" + std::string(text) + "'");
        }
    }
    return Dims{v[0], v[1], v[2]};
}

std::string to_string(Dims dims) {
    return std::to_string(dims.x) + "x" + std::to_string(dims.y) + "x" + std::to_string(dims.z);
}

void LinkSpec::validate() const {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw InputError("link bandwidth must be positive");
    }
    if (!(latency >= 0.0) || !std::isfinite(latency)) {
        throw InputError("link latency must be non-negative");
    }
    if (!(bit_error_rate >= 0.0 && bit_error_rate < 1.0)) {
        throw InputError("link bit error rate must be in [0, 1)");
    }
}

Topology Topology::build(TopologyKind kind, Dims dims, const LinkTable& links, bool wireless_full) {
    if (dims.x <= 0 || dims.y <= 0 || dims.z <= 0) {
        throw InputError("topology dimensions must be positive, got " + to_string(dims));
    }
    if (kind == TopologyKind::haec_box && dims.x != dims.y) {
        throw InputError("haec topology needs square boards, got " + to_string(dims));
    }
    links.optical.validate();
    links.wireless.validate();

    Topology t;
    t.kind_ = kind;
    t.dims_ = dims;
    t.links_ = links;
    t.links_.optical.kind = LinkKind::optical;
    t.links_.wireless.kind = LinkKind::wireless;
    t.wireless_full_ = kind == TopologyKind::haec_box && wireless_full;

    const int n = dims.volume();
    t.adjacency_.resize(static_cast<std::size_t>(n));
    for (NodeId id = 0; id < n; ++id) {
        const Coord c = t.coord(id);
        auto& adj = t.adjacency_[static_cast<std::size_t>(id)];
        const bool wraps_xy = kind != TopologyKind::mesh;
        const bool wraps_z = kind == TopologyKind::torus;
        for (int dim = 0; dim < 3; ++dim) {
            const int size = axis(dims, dim);
            if (size == 1) continue;
            if (dim == 2 && kind == TopologyKind::haec_box) continue;
            const bool wraps = dim == 2 ? wraps_z : wraps_xy;
            for (int step : {-1, +1}) {
                Coord nb = c;
                int& v = axis(nb, dim);
                v += step;
                if (wraps) {
                    v = wrap(v, size);
                } else if (v < 0 || v >= size) {
                    continue;
                }
                adj.push_back(t.node_id(nb));
            }
        }
        if (kind == TopologyKind::haec_box) {
            for (int z = 0; z < dims.z; ++z) {
                if (z == c.z) continue;
                if (!t.wireless_full_ && std::abs(z - c.z) != 1) continue;
                for (int y = 0; y < dims.y; ++y) {
                    for (int x = 0; x < dims.x; ++x) {
                        adj.push_back(t.node_id(Coord{x, y, z}));
                    }
                }
            }
        }
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
        t.link_count_ += adj.size();
    }
    return t;
}

bool Topology::contains(Coord c) const {
    return c.x >= 0 && c.x < dims_.x && c.y >= 0 && c.y < dims_.y && c.z >= 0 && c.z < dims_.z;
}

void Topology::check(Coord c) const {
    if (!contains(c)) {
        throw InputError("coordinate (" + std::to_string(c.x) + "," + std::to_string(c.y) + "," +
                         std::to_string(c.z) + ") outside " + to_string(dims_));
    }
}

NodeId Topology::node_id(Coord c) const {
    check(c);
    return c.x + dims_.x * (c.y + dims_.y * c.z);
}

Coord Topology::coord(NodeId id) const {
    if (id < 0 || id >= node_count()) {
        throw InputError("node id " + std::to_string(id) + " outside [0, " +
                         std::to_string(node_count()) + ")");
    }
    return Coord{id % dims_.x, (id / dims_.x) % dims_.y, id / (dims_.x * dims_.y)};
}

int Topology::distance(Coord a, Coord b) const {
    check(a);
    check(b);
    switch (kind_) {
        case TopologyKind::mesh:
            return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z);
        case TopologyKind::torus:
            return ring_distance(a.x, b.x, dims_.x) + ring_distance(a.y, b.y, dims_.y) +
                   ring_distance(a.z, b.z, dims_.z);
        case TopologyKind::haec_box:
            if (a.z == b.z) {
                return ring_distance(a.x, b.x, dims_.x) + ring_distance(a.y, b.y, dims_.y);
            }
            return wireless_full_ ? 1 : std::abs(a.z - b.z);
    }
    return 0;
}

LinkKind Topology::link_kind(Coord a, Coord b) const {
    if (kind_ == TopologyKind::haec_box && a.z != b.z) {
        return LinkKind::wireless;
    }
    return LinkKind::optical;
}

Route Topology::route(Coord a, Coord b) const {
    check(a);
    check(b);
    Route r;
    Coord cur = a;
    auto push_move = [&](const Coord& next) {
        r.hops.push_back(Hop{node_id(cur), node_id(next), links_[link_kind(cur, next)]});
        cur = next;
    };
    auto walk_dim = [&](int dim, bool wraps) {
        const int size = axis(dims_, dim);
        while (axis(cur, dim) != axis(b, dim)) {
            const int dir = wraps ? ring_direction(axis(cur, dim), axis(b, dim), size)
                                  : sign(axis(b, dim) - axis(cur, dim));
            Coord next = cur;
            axis(next, dim) = wraps ? wrap(axis(cur, dim) + dir, size) : axis(cur, dim) + dir;
            push_move(next);
        }
    };

    switch (kind_) {
        case TopologyKind::mesh:
        case TopologyKind::torus: {
            const bool wraps = kind_ == TopologyKind::torus;
            walk_dim(0, wraps);
            walk_dim(1, wraps);
            walk_dim(2, wraps);
            break;
        }
        case TopologyKind::haec_box:
            if (a.z == b.z) {
                walk_dim(0, true);
                walk_dim(1, true);
            } else {
                const int first_z = wireless_full_ ? b.z : a.z + sign(b.z - a.z);
                push_move(Coord{b.x, b.y, first_z});
                walk_dim(2, false);
            }
            break;
    }
    return r;
}

std::span<const NodeId> Topology::neighbors(NodeId id) const {
    coord(id);  // range check
    return adjacency_[static_cast<std::size_t>(id)];
}

std::optional<LinkSpec> Topology::link(NodeId from, NodeId to) const {
    const auto adj = neighbors(from);
    if (!std::binary_search(adj.begin(), adj.end(), to)) {
        return std::nullopt;
    }
    return links_[link_kind(coord(from), coord(to))];
}

int Topology::diameter() const {
    switch (kind_) {
        case TopologyKind::mesh:
            return (dims_.x - 1) + (dims_.y - 1) + (dims_.z - 1);
        case TopologyKind::torus:
            return dims_.x / 2 + dims_.y / 2 + dims_.z / 2;
        case TopologyKind::haec_box: {
            const int board = dims_.x / 2 + dims_.y / 2;
            const int cross = dims_.z == 1 ? 0 : (wireless_full_ ? 1 : dims_.z - 1);
            return std::max(board, cross);
        }
    }
    return 0;
}

std::string Topology::label() const {
    std::string s = std::string(to_string(kind_)) + "-" + to_string(dims_);
    if (wireless_full_) s += "-full";
    return s;
}

DistanceTable::DistanceTable(const Topology& topology) : n_(topology.node_count()) {
    table_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
    std::vector<Coord> coords(static_cast<std::size_t>(n_));
    for (NodeId i = 0; i < n_; ++i) coords[static_cast<std::size_t>(i)] = topology.coord(i);
    for (NodeId i = 0; i < n_; ++i) {
        for (NodeId j = 0; j < n_; ++j) {
            table_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                   static_cast<std::size_t>(j)] =
                topology.distance(coords[static_cast<std::size_t>(i)],
                                  coords[static_cast<std::size_t>(j)]);
        }
    }
}

long long DistanceTable::distance_sum(NodeId a) const {
    long long s = 0;
    for (NodeId b = 0; b < n_; ++b) s += (*this)(a, b);
    return s;
}

}  // namespace mapkit
