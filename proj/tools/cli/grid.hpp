// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "run_config.hpp"

namespace mapkit::cli {

struct ExperimentRow {
    std::string app;
    std::string topology;
    std::string algorithm;
    std::string kind;
    double dilation = 0.0;
    double total_hops = 0.0;
    double avg_hops = 0.0;
    double comm_model_time = 0.0;
    double p2p_cost = 0.0;
    double parallel_cost = 0.0;
    bool prepost_ok = false;  // pre-simulation dilation == post-simulation dilation
};

/// Runs every (application, topology, algorithm, kind) cell, writing
/// <out>/<app>/<topology>/<algorithm>-<kind>.{map,quality.json,sim.json} and
/// <out>/experiments.csv. Rows come back sorted by (app, topology, algorithm,
/// kind) for any `jobs`.
std::vector<ExperimentRow> run_grid(const RunConfig& config, int jobs = 1);

std::string experiments_csv(const std::vector<ExperimentRow>& rows);

}  // namespace mapkit::cli
