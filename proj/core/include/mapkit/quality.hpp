// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mapkit/comm.hpp"
#include "mapkit/mapping.hpp"
#include "mapkit/topology.hpp"

namespace mapkit {

struct LinkLoad {
    NodeId from = 0;
    NodeId to = 0;
    double load = 0.0;

    friend bool operator==(const LinkLoad&, const LinkLoad&) = default;
};

struct HopStats {
    double total_hops = 0.0;
    double avg_hops = 0.0;
};

struct QualityReport {
    MatrixKind kind = MatrixKind::count;
    double dilation = 0.0;  // hop*Byte or hop*message
    double total_hops = 0.0;
    double avg_hops_per_message = 0.0;
    std::vector<LinkLoad> link_loads;  // every directed link, ascending (from, to)
};

/// D = sum_i sum_j d(node(i), node(j)) * M[i][j], over ordered pairs.
double dilation(const CommMatrix& m, const Mapping& mapping, const Topology& topology);

/// Routes every M[i][j] along route(node(i), node(j)) and sums per link.
std::vector<LinkLoad> link_loads(const CommMatrix& m, const Mapping& mapping,
                                 const Topology& topology);

/// avg = total / sum(M); 0 with a warning when the matrix is empty.
HopStats hop_stats(const CommMatrix& m, const Mapping& mapping, const Topology& topology);

QualityReport evaluate_quality(const CommMatrix& m, const Mapping& mapping,
                               const Topology& topology);

struct RunLabels {
    std::string run_id;
    std::string app;
    std::string algorithm;
    std::string kind;
    std::string topology;

    friend bool operator==(const RunLabels&, const RunLabels&) = default;
};

std::string quality_to_json(const QualityReport& report, const RunLabels& labels);

struct QualitySummary {
    RunLabels labels;
    MatrixKind kind = MatrixKind::count;
    double dilation = 0.0;
    double total_hops = 0.0;
    double avg_hops = 0.0;
};
QualitySummary parse_quality_json(std::string_view text);

std::string quality_csv_header();
std::string quality_csv_row(const QualityReport& report, const RunLabels& labels);

}  // namespace mapkit
