// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mapkit/comm.hpp"
#include "mapkit/mapping.hpp"
#include "mapkit/topology.hpp"
#include "mapkit/trace.hpp"

namespace mapkit {

struct ModelConfig {
    std::uint64_t packet_bytes = 4096;
    bool reliability_inflation = true;
    double collective_min_delay = 0.0;  // seconds

    void validate() const;
};

/// Contention-oblivious message cost model.
class LinkModel {
public:
    virtual ~LinkModel() = default;
    /// Seconds to move `bytes` along a non-empty route.
    virtual double transfer_time(std::uint64_t bytes, const Route& route) const = 0;
};

/// Pipelined store-and-forward of fixed-size packets. Each packet crossing
/// hop i costs s_i = 8 P r_i / bw_i, r_i = (1 - BER_i)^(-8P) being the
/// expected retransmission factor. time = sum(lat_i + s_i) + (m - 1) max s_i.
class PipelinedLinkModel final : public LinkModel {
public:
    explicit PipelinedLinkModel(ModelConfig config = {});
    double transfer_time(std::uint64_t bytes, const Route& route) const override;
    const ModelConfig& config() const { return config_; }

private:
    ModelConfig config_;
};

/// Pipelined model cost. Empty route: 0 for a local zero-volume transfer,
/// SimulationError otherwise.
double transfer_time(std::uint64_t bytes, const Route& route, const ModelConfig& config = {});

struct LinkBytes {
    NodeId from = 0;
    NodeId to = 0;
    std::uint64_t bytes = 0;

    friend bool operator==(const LinkBytes&, const LinkBytes&) = default;
};

/// One non-empty cell of the post-simulation matrices.
struct PairTraffic {
    int src = 0;
    int dst = 0;
    std::uint64_t count = 0;
    std::uint64_t bytes = 0;

    friend bool operator==(const PairTraffic&, const PairTraffic&) = default;
};

struct SimReport {
    int ranks = 0;
    int node_count = 0;
    std::vector<double> per_rank_finish;  // seconds
    double makespan = 0.0;
    double parallel_cost = 0.0;           // node * seconds
    double p2p_cost = 0.0;                // seconds inside send/recv/wait, all ranks
    double comm_model_time = 0.0;         // sum of transfer durations
    std::uint64_t msg_count = 0;
    std::uint64_t total_bytes = 0;
    std::uint64_t post_dilation_count = 0;   // hop * message
    std::uint64_t post_dilation_volume = 0;  // hop * Byte
    std::vector<LinkBytes> per_link_bytes;   // non-zero links, ascending
    std::vector<PairTraffic> traffic;        // off-diagonal pairs, ascending

    double post_dilation(MatrixKind kind) const {
        return static_cast<double>(kind == MatrixKind::count ? post_dilation_count
                                                             : post_dilation_volume);
    }

    friend bool operator==(const SimReport&, const SimReport&) = default;
};

/// Deterministic replay of `trace` with rank r placed on mapping.node_of(r).
/// Throws DeadlockError when ranks block forever and SimulationError when a
/// message is never received.
SimReport simulate(const Trace& trace, const Mapping& mapping, const Topology& topology,
                   const ModelConfig& config = {});
SimReport simulate(const Trace& trace, const Mapping& mapping, const Topology& topology,
                   const LinkModel& model, const ModelConfig& config);

/// Count and volume matrices rebuilt from the simulated messages.
MatrixPair post_matrices(const SimReport& report);

/// Canonical JSON: sorted keys, shortest round-trip floats, trailing newline.
std::string report_to_json(const SimReport& report);
SimReport parse_report_json(std::string_view text);

std::string report_csv_header();
std::string report_csv_row(const SimReport& report);

}  // namespace mapkit
