// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mapkit/comm.hpp"
#include "mapkit/topology.hpp"

namespace mapkit {

enum class OpKind { compute, send, recv, isend, irecv, wait, coll };

std::string_view to_string(OpKind op);
OpKind parse_op(std::string_view name);

struct TraceEvent {
    int rank = 0;
    OpKind op = OpKind::compute;
    std::int64_t dur_ns = 0;  // compute only
    int peer = -1;            // send/recv family
    std::uint64_t bytes = 0;
    int tag = 0;
    int req = -1;             // isend/irecv/wait
    std::string coll_id;      // coll only

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// Per-rank ordered event sequences.
struct Trace {
    int ranks = 0;
    std::vector<std::vector<TraceEvent>> events;

    explicit Trace(int n = 0) : ranks(n), events(static_cast<std::size_t>(n)) {}

    void push(TraceEvent e);

    /// Throws InputError on: rank/peer out of range, duplicate or dangling
    /// request ids, wait before its isend/irecv, a coll_id repeated on a rank.
    void validate() const;

    std::uint64_t message_count() const;
    std::uint64_t total_bytes() const;

    friend bool operator==(const Trace&, const Trace&) = default;
};

/// Line-delimited JSON. The first line is a header {"format":"mapkit-trace",
/// "ranks":N}; each further line is one event with integer nanosecond times,
/// e.g. {"rank":0,"op":"isend","peer":1,"bytes":1024,"tag":0,"req":0}.
Trace parse_trace(std::istream& in, std::string_view source = "<stream>");
Trace load_trace(const std::filesystem::path& path);
void write_trace(const Trace& trace, std::ostream& out);
void write_trace(const Trace& trace, const std::filesystem::path& path);

enum class TracePattern { ring, stencil7, random_sparse, cg_like };

std::string_view to_string(TracePattern pattern);
TracePattern parse_pattern(std::string_view name);

struct TraceParams {
    std::uint64_t bytes = 1024;      // per message (upper bound for random-sparse)
    int iters = 1;
    std::int64_t compute_ns = 1000;  // per iteration
    int degree = 4;                  // random-sparse out-degree
    std::optional<Dims> grid;        // stencil7 process grid; default near-cubic
};

/**
 * Synthetic traces, deterministic per seed.
 *   ring           isend to r+1, irecv from r-1, two waits, compute
 *   stencil7       7-point halo exchange on a non-periodic 3-D process grid
 *                  (ranks in x-fastest order), non-blocking
 *   random-sparse  `degree` random destinations per rank with random sizes in
 *                  [1, bytes], non-blocking
 *   cg-like        blocking send/recv: recursive-doubling exchange inside each
 *                  row of a 2-D process grid, a transpose exchange, then a
 *                  collective; n must be a power of two
 */
Trace gen_trace(TracePattern pattern, int n, const TraceParams& params, std::uint64_t seed);

/// Process-logical count and volume matrices of the point-to-point messages.
/// n defaults to trace.ranks. Self-messages are dropped.
struct MatrixPair {
    CommMatrix count;
    CommMatrix volume;
};
MatrixPair trace_matrices(const Trace& trace, int n = -1);

/// Process grid used by stencil7 when none is given.
Dims stencil_grid(int n);

}  // namespace mapkit
