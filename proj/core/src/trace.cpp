// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "mapkit/trace.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "internal.hpp"
#include "mapkit/error.hpp"
#include "mapkit/format.hpp"

namespace mapkit {
namespace {

bool is_send(OpKind op) { return op == OpKind::send || op == OpKind::isend; }
bool is_p2p(OpKind op) {
    return op == OpKind::send || op == OpKind::recv || op == OpKind::isend || op == OpKind::irecv;
}

TraceEvent make(int rank, OpKind op) {
    TraceEvent e;
    e.rank = rank;
    e.op = op;
    return e;
}

TraceEvent p2p(int rank, OpKind op, int peer, std::uint64_t bytes, int tag, int req = -1) {
    TraceEvent e = make(rank, op);
    e.peer = peer;
    e.bytes = bytes;
    e.tag = tag;
    e.req = req;
    return e;
}

TraceEvent wait_on(int rank, int req) {
    TraceEvent e = make(rank, OpKind::wait);
    e.req = req;
    return e;
}

TraceEvent compute(int rank, std::int64_t ns) {
    TraceEvent e = make(rank, OpKind::compute);
    e.dur_ns = ns;
    return e;
}

}  // namespace

std::string_view to_string(OpKind op) {
    switch (op) {
        case OpKind::compute: return "compute";
        case OpKind::send: return "send";
        case OpKind::recv: return "recv";
        case OpKind::isend: return "isend";
        case OpKind::irecv: return "irecv";
        case OpKind::wait: return "wait";
        case OpKind::coll: return "coll";
    }
    return "?";
}

OpKind parse_op(std::string_view name) {
    for (OpKind op : {OpKind::compute, OpKind::send, OpKind::recv, OpKind::isend, OpKind::irecv,
                      OpKind::wait, OpKind::coll}) {
        if (to_string(op) == name) return op;
    }
    throw InputError("unknown trace op '" + std::string(name) + "'");
}

void Trace::push(TraceEvent e) {
    if (e.rank < 0 || e.rank >= ranks) {
        throw InputError("trace event rank " + std::to_string(e.rank) + " outside [0, " +
                         std::to_string(ranks) + ")");
    }
    events[static_cast<std::size_t>(e.rank)].push_back(std::move(e));
}

void Trace::validate() const {
    if (static_cast<int>(events.size()) != ranks) {
        throw InputError("trace event table does not match rank count");
    }
    for (int r = 0; r < ranks; ++r) {
        std::set<int> outstanding;
        std::set<std::string> colls;
        for (std::size_t i = 0; i < events[static_cast<std::size_t>(r)].size(); ++i) {
            const TraceEvent& e = events[static_cast<std::size_t>(r)][i];
            const std::string at = "rank " + std::to_string(r) + " event " + std::to_string(i) + ": ";
            if (e.rank != r) throw InputError(at + "rank field mismatch");
            if (is_p2p(e.op) && (e.peer < 0 || e.peer >= ranks)) {
                throw InputError(at + "peer " + std::to_string(e.peer) + " out of range");
            }
            switch (e.op) {
                case OpKind::compute:
                    if (e.dur_ns < 0) throw InputError(at + "negative compute duration");
                    break;
                case OpKind::isend:
                case OpKind::irecv:
                    if (e.req < 0) throw InputError(at + "missing request id");
                    if (!outstanding.insert(e.req).second) {
                        throw InputError(at + "request " + std::to_string(e.req) +
                                         " is already outstanding");
                    }
                    break;
                case OpKind::wait:
                    if (outstanding.erase(e.req) == 0) {
                        throw InputError(at + "wait on unknown request " + std::to_string(e.req));
                    }
                    break;
                case OpKind::coll:
                    if (e.coll_id.empty()) throw InputError(at + "collective without coll_id");
                    if (!colls.insert(e.coll_id).second) {
                        throw InputError(at + "coll_id '" + e.coll_id + "' repeated");
                    }
                    break;
                case OpKind::send:
                case OpKind::recv:
                    break;
            }
        }
        if (!outstanding.empty()) {
            throw InputError("rank " + std::to_string(r) + ": request " +
                             std::to_string(*outstanding.begin()) + " is never waited on");
        }
    }
}

std::uint64_t Trace::message_count() const {
    std::uint64_t c = 0;
    for (const auto& seq : events)
        for (const auto& e : seq) c += is_send(e.op) ? 1 : 0;
    return c;
}

std::uint64_t Trace::total_bytes() const {
    std::uint64_t b = 0;
    for (const auto& seq : events)
        for (const auto& e : seq) b += is_send(e.op) ? e.bytes : 0;
    return b;
}

Trace parse_trace(std::istream& in, std::string_view source) {
    const std::string where(source);
    std::string line;
    int line_no = 0;
    std::optional<Trace> trace;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) continue;
        const std::string at = where + ":" + std::to_string(line_no) + ": ";
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw InputError(at + "malformed line: " + e.what());
        }
        try {
            if (!trace) {
                if (!j.contains("ranks")) throw InputError(at + "missing trace header");
                const int n = j.at("ranks").get<int>();
                if (n <= 0) throw InputError(at + "trace needs at least one rank");
                trace.emplace(n);
                continue;
            }
            TraceEvent e;
            e.rank = j.at("rank").get<int>();
            e.op = parse_op(j.at("op").get<std::string>());
            e.dur_ns = j.value("dur_ns", std::int64_t{0});
            e.peer = j.value("peer", -1);
            e.bytes = j.value("bytes", std::uint64_t{0});
            e.tag = j.value("tag", 0);
            e.req = j.value("req", -1);
            e.coll_id = j.value("coll_id", std::string{});
            if (e.rank < 0 || e.rank >= trace->ranks) {
                throw InputError(at + "rank " + std::to_string(e.rank) + " out of range");
            }
            trace->push(std::move(e));
        } catch (const nlohmann::json::exception& e) {
            throw InputError(at + "malformed event: " + e.what());
        }
    }
    if (!trace) throw InputError(where + ": empty trace");
    trace->validate();
    return std::move(*trace);
}

Trace load_trace(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open trace file " + path.string());
    return parse_trace(in, path.string());
}

void write_trace(const Trace& trace, std::ostream& out) {
    nlohmann::json header;
    header["format"] = "mapkit-trace";
    header["ranks"] = trace.ranks;
    out << header.dump() << '\n';
    for (const auto& seq : trace.events) {
        for (const TraceEvent& e : seq) {
            nlohmann::json j;
            j["rank"] = e.rank;
            j["op"] = std::string(to_string(e.op));
            switch (e.op) {
                case OpKind::compute:
                    j["dur_ns"] = e.dur_ns;
                    break;
                case OpKind::send:
                case OpKind::recv:
                    j["peer"] = e.peer;
                    j["bytes"] = e.bytes;
                    j["tag"] = e.tag;
                    break;
                case OpKind::isend:
                case OpKind::irecv:
                    j["peer"] = e.peer;
                    j["bytes"] = e.bytes;
                    j["tag"] = e.tag;
                    j["req"] = e.req;
                    break;
                case OpKind::wait:
                    j["req"] = e.req;
                    break;
                case OpKind::coll:
                    j["coll_id"] = e.coll_id;
                    break;
            }
            out << j.dump() << '\n';
        }
    }
}

void write_trace(const Trace& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write trace file " + path.string());
    write_trace(trace, out);
}

std::string_view to_string(TracePattern pattern) {
    switch (pattern) {
        case TracePattern::ring: return "ring";
        case TracePattern::stencil7: return "stencil7";
        case TracePattern::random_sparse: return "random-sparse";
        case TracePattern::cg_like: return "cg-like";
    }
    return "?";
}

TracePattern parse_pattern(std::string_view name) {
    for (TracePattern p : {TracePattern::ring, TracePattern::stencil7, TracePattern::random_sparse,
                           TracePattern::cg_like}) {
        if (to_string(p) == name) return p;
    }
    throw InputError("unknown trace pattern '" + std::string(name) +
                     "' (expected ring, stencil7, random-sparse or cg-like)");
}

Dims stencil_grid(int n) {
    Dims best{n, 1, 1};
    int best_spread = n - 1;
    for (int x = 1; x <= n; ++x) {
        if (n % x) continue;
        for (int y = 1; y <= x; ++y) {
            if ((n / x) % y) continue;
            const int z = n / x / y;
            if (z > y) continue;
            const int spread = x - z;
            if (spread < best_spread) {
                best = Dims{x, y, z};
                best_spread = spread;
            }
        }
    }
    return best;
}

Trace gen_trace(TracePattern pattern, int n, const TraceParams& params, std::uint64_t seed) {
    if (n <= 0) throw InputError("trace needs at least one rank");
    if (params.iters < 0) throw InputError("iteration count must be non-negative");
    Trace t(n);
    switch (pattern) {
        case TracePattern::ring:
            for (int it = 0; it < params.iters; ++it) {
                for (int r = 0; r < n; ++r) {
                    t.push(p2p(r, OpKind::isend, (r + 1) % n, params.bytes, 0, 0));
                    t.push(p2p(r, OpKind::irecv, (r - 1 + n) % n, params.bytes, 0, 1));
                    t.push(wait_on(r, 0));
                    t.push(wait_on(r, 1));
                    t.push(compute(r, params.compute_ns));
                }
            }
            break;

        case TracePattern::stencil7: {
            const Dims g = params.grid.value_or(stencil_grid(n));
            if (g.volume() != n) {
                throw InputError("stencil grid " + to_string(g) + " does not hold " +
                                 std::to_string(n) + " ranks");
            }
            for (int it = 0; it < params.iters; ++it) {
                for (int r = 0; r < n; ++r) {
                    const Coord c{r % g.x, (r / g.x) % g.y, r / (g.x * g.y)};
                    std::vector<int> nbrs;
                    const int steps[6][3] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0},
                                             {0, 1, 0},  {0, 0, -1}, {0, 0, 1}};
                    for (const auto& s : steps) {
                        const Coord q{c.x + s[0], c.y + s[1], c.z + s[2]};
                        if (q.x < 0 || q.x >= g.x || q.y < 0 || q.y >= g.y || q.z < 0 || q.z >= g.z)
                            continue;
                        nbrs.push_back(q.x + g.x * (q.y + g.y * q.z));
                    }
                    const int k = static_cast<int>(nbrs.size());
                    for (int i = 0; i < k; ++i)
                        t.push(p2p(r, OpKind::irecv, nbrs[static_cast<std::size_t>(i)], params.bytes, 0, i));
                    for (int i = 0; i < k; ++i)
                        t.push(p2p(r, OpKind::isend, nbrs[static_cast<std::size_t>(i)], params.bytes, 0, k + i));
                    for (int i = 0; i < 2 * k; ++i) t.push(wait_on(r, i));
                    t.push(compute(r, params.compute_ns));
                }
            }
            break;
        }

        case TracePattern::random_sparse: {
            if (params.bytes == 0) throw InputError("random-sparse needs bytes >= 1");
            std::mt19937_64 rng(seed);
            for (int it = 0; it < params.iters; ++it) {
                // (dst, src, bytes) so receivers can post in source order
                std::vector<std::vector<std::pair<int, std::uint64_t>>> out(static_cast<std::size_t>(n));
                std::vector<std::vector<std::pair<int, std::uint64_t>>> in(static_cast<std::size_t>(n));
                for (int r = 0; r < n; ++r) {
                    const int want = std::min(params.degree, n - 1);
                    std::set<int> dests;
                    while (static_cast<int>(dests.size()) < want) {
                        const int d = static_cast<int>(
                            detail::uniform_below(rng, static_cast<std::uint64_t>(n)));
                        if (d != r) dests.insert(d);
                    }
                    for (int d : dests) {
                        const std::uint64_t b = 1 + detail::uniform_below(rng, params.bytes);
                        out[static_cast<std::size_t>(r)].emplace_back(d, b);
                        in[static_cast<std::size_t>(d)].emplace_back(r, b);
                    }
                }
                for (int r = 0; r < n; ++r) {
                    auto& incoming = in[static_cast<std::size_t>(r)];
                    std::sort(incoming.begin(), incoming.end());
                    int req = 0;
                    for (const auto& [src, b] : incoming) t.push(p2p(r, OpKind::irecv, src, b, 0, req++));
                    for (const auto& [dst, b] : out[static_cast<std::size_t>(r)])
                        t.push(p2p(r, OpKind::isend, dst, b, 0, req++));
                    for (int q = 0; q < req; ++q) t.push(wait_on(r, q));
                    t.push(compute(r, params.compute_ns));
                }
            }
            break;
        }

        case TracePattern::cg_like: {
            if (!std::has_single_bit(static_cast<unsigned>(n))) {
                throw InputError("cg-like pattern needs a power-of-two rank count");
            }
            const int log_n = std::countr_zero(static_cast<unsigned>(n));
            const int rows = 1 << (log_n / 2);
            const int cols = n / rows;
            const int row_steps = std::countr_zero(static_cast<unsigned>(cols));
            for (int it = 0; it < params.iters; ++it) {
                for (int r = 0; r < n; ++r) {
                    const int row = r / cols;
                    const int col = r % cols;
                    for (int s = 0; s < row_steps; ++s) {
                        const int partner = row * cols + (col ^ (1 << s));
                        t.push(p2p(r, OpKind::send, partner, params.bytes, s));
                        t.push(p2p(r, OpKind::recv, partner, params.bytes, s));
                    }
                    // Transpose-style exchange; on non-square grids pair the two halves.
                    const int partner = rows == cols ? col * cols + row : (r + n / 2) % n;
                    if (partner != r) {
                        t.push(p2p(r, OpKind::send, partner, params.bytes / 2 + 1, 100));
                        t.push(p2p(r, OpKind::recv, partner, params.bytes / 2 + 1, 100));
                    }
                    t.push(compute(r, params.compute_ns));
                    TraceEvent c = make(r, OpKind::coll);
                    c.coll_id = "allreduce-" + std::to_string(it);
                    t.push(std::move(c));
                }
            }
            break;
        }
    }
    t.validate();
    return t;
}

MatrixPair trace_matrices(const Trace& trace, int n) {
    if (n < 0) n = trace.ranks;
    if (n < trace.ranks) throw InputError("matrix smaller than the trace's rank count");
    MatrixPair mp{CommMatrix(n, MatrixKind::count), CommMatrix(n, MatrixKind::volume)};
    for (const auto& seq : trace.events) {
        for (const TraceEvent& e : seq) {
            if (!is_send(e.op) || e.peer == e.rank) continue;
            mp.count.add(e.rank, e.peer, 1.0);
            mp.volume.add(e.rank, e.peer, static_cast<double>(e.bytes));
        }
    }
    return mp;
}

}  // namespace mapkit
