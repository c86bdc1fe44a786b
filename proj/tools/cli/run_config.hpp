// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mapkit/comm.hpp"
#include "mapkit/mapping.hpp"
#include "mapkit/simkernel.hpp"
#include "mapkit/topology.hpp"
#include "mapkit/trace.hpp"

namespace mapkit::cli {

struct TraceGenerator {
    TracePattern pattern = TracePattern::ring;
    TraceParams params;
    std::uint64_t seed = kDefaultSeed;
};

struct Application {
    std::string name;
    std::optional<std::filesystem::path> trace_file;
    std::optional<TraceGenerator> generate;
    std::optional<std::filesystem::path> count_matrix;   // derived from the trace when absent
    std::optional<std::filesystem::path> volume_matrix;
};

struct RunConfig {
    TopologyKind topology = TopologyKind::torus;  // default for single-run commands
    Dims dims{4, 4, 4};
    LinkTable links;
    bool wireless_full = false;
    ModelConfig model;
    std::filesystem::path output_dir = "mapkit-out";
    std::vector<Application> applications;
    std::vector<Algorithm> algorithms;
    std::vector<MatrixKind> kinds;
    std::vector<TopologyKind> topologies;
    std::uint64_t seed = kDefaultSeed;
};

/// JSON run configuration. Relative paths are resolved against `base_dir`.
/// Throws InputError when a referenced file is missing, the grid is empty or
/// sizes disagree with the topology dims.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// Seed precedence: explicit flag, then MAPKIT_SEED, then kDefaultSeed.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

}  // namespace mapkit::cli
