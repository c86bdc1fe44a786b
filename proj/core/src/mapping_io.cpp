// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mapkit/error.hpp"
#include "mapkit/format.hpp"
#include "mapkit/mapping.hpp"

namespace mapkit {
namespace {

template <typename T>
bool parse_number(std::string_view text, T& out) {
    text = trim(text);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return !text.empty() && ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

void write_mapping(const Mapping& mapping, std::ostream& out) {
    const auto& meta = mapping.meta();
    out << "# algorithm=" << meta.algorithm << '\n';
    out << "# matrix=" << (meta.matrix ? std::string(to_string(*meta.matrix)) : "none") << '\n';
    out << "# seed=" << (meta.seed ? std::to_string(*meta.seed) : "none") << '\n';
    const Dims d = mapping.dims();
    for (int r = 0; r < mapping.size(); ++r) {
        const NodeId id = mapping.node_of(r);
        out << r << ' ' << id % d.x << ' ' << (id / d.x) % d.y << ' ' << id / (d.x * d.y) << '\n';
    }
}

void write_mapping(const Mapping& mapping, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write mapping file " + path.string());
    }
    write_mapping(mapping, out);
}

std::string mapping_to_string(const Mapping& mapping) {
    std::ostringstream out;
    write_mapping(mapping, out);
    return out.str();
}

Mapping read_mapping(std::istream& in, const Topology& topology, std::string_view source) {
    const std::string where(source);
    const int n = topology.node_count();
    std::vector<NodeId> assignment(static_cast<std::size_t>(n), -1);
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    MappingMeta meta;
    int ranks = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) continue;
        const std::string at = where + ":" + std::to_string(line_no) + ": ";
        if (text.front() == '#') {
            const auto body = trim(text.substr(1));
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) continue;
            const auto key = trim(body.substr(0, eq));
            const auto value = trim(body.substr(eq + 1));
            if (key == "algorithm") {
                meta.algorithm = std::string(value);
            } else if (key == "matrix") {
                meta.matrix = value == "none" ? std::nullopt
                                              : std::optional<MatrixKind>(parse_matrix_kind(value));
            } else if (key == "seed") {
                std::uint64_t s = 0;
                if (value == "none") {
                    meta.seed.reset();
                } else if (parse_number(value, s)) {
                    meta.seed = s;
                } else {
                    throw InputError(at + "bad seed '" + std::string(value) + "'");
                }
            }
            continue;
        }
        std::vector<std::string_view> fields;
        for (auto f : split(text, ' ')) {
            if (!trim(f).empty()) fields.push_back(f);
        }
        int v[4] = {0, 0, 0, 0};
        if (fields.size() != 4 || !parse_number(fields[0], v[0]) || !parse_number(fields[1], v[1]) ||
            !parse_number(fields[2], v[2]) || !parse_number(fields[3], v[3])) {
            throw InputError(at + "expected 'rank x y z'");
        }
        const int rank = v[0];
        if (rank < 0 || rank >= n) {
            throw InputError(at + "rank " + std::to_string(rank) + " outside [0, " +
                             std::to_string(n) + ")");
        }
        const Coord c{v[1], v[2], v[3]};
        if (!topology.contains(c)) {
            throw InputError(at + "node (" + std::to_string(c.x) + "," + std::to_string(c.y) + "," +
                             std::to_string(c.z) + ") out of range for " +
                             to_string(topology.dims()));
        }
        if (assignment[static_cast<std::size_t>(rank)] != -1) {
            throw InputError(at + "rank " + std::to_string(rank) + " listed twice");
        }
        const NodeId node = topology.node_id(c);
        if (owner[static_cast<std::size_t>(node)] != -1) {
            throw InputError(at + "mapping is not bijective: node " + std::to_string(node) +
                             " already holds rank " +
                             std::to_string(owner[static_cast<std::size_t>(node)]));
        }
        assignment[static_cast<std::size_t>(rank)] = node;
        owner[static_cast<std::size_t>(node)] = rank;
        ++ranks;
    }
    if (ranks != n) {
        throw InputError(where + ": mapping lists " + std::to_string(ranks) + " ranks, topology " +
                         to_string(topology.dims()) + " has " + std::to_string(n) + " nodes");
    }
    return Mapping(std::move(assignment), topology.kind(), topology.dims(), std::move(meta));
}

Mapping read_mapping(const std::filesystem::path& path, const Topology& topology) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open mapping file " + path.string());
    }
    return read_mapping(in, topology, path.string());
}

}  // namespace mapkit
