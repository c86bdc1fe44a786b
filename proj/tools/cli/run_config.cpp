// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "run_config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mapkit/error.hpp"

namespace mapkit::cli {
namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

std::filesystem::path existing(const std::filesystem::path& base, const std::string& p) {
    auto path = resolve(base, p);
    if (!std::filesystem::exists(path)) throw InputError("referenced file " + path.string() + " does not exist");
    return path;
}

Dims read_dims(const json& j) {
    if (j.is_string()) return parse_dims(j.get<std::string>());
    const auto v = j.get<std::vector<int>>();
    if (v.size() != 3) throw InputError("topology dims need three entries");
    return Dims{v[0], v[1], v[2]};
}

void read_link(const json& j, LinkSpec& link) {
    link.bandwidth = j.value("bandwidth", link.bandwidth);
    link.latency = j.value("latency", link.latency);
    link.bit_error_rate = j.value("bit_error_rate", link.bit_error_rate);
    link.validate();
}

TraceGenerator read_generator(const json& j) {
    TraceGenerator g;
    g.pattern = parse_pattern(j.at("pattern").get<std::string>());
    g.params.iters = j.value("iters", g.params.iters);
    g.params.bytes = j.value("bytes", g.params.bytes);
    g.params.compute_ns = j.value("compute_ns", g.params.compute_ns);
    g.params.degree = j.value("degree", g.params.degree);
    if (j.contains("grid")) g.params.grid = read_dims(j.at("grid"));
    g.seed = j.value("seed", g.seed);
    return g;
}

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("MAPKIT_SEED"); env && *env) {
        const std::string_view text(env);
        std::uint64_t seed = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            throw InputError("MAPKIT_SEED='" + std::string(text) + "' is not an unsigned integer");
        }
        return seed;
    }
    return kDefaultSeed;
}

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    RunConfig c;
    try {
        const json j = json::parse(json_text);
        c.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : resolve_seed(std::nullopt);

        if (j.contains("topology")) {
            const json& t = j.at("topology");
            if (t.contains("kind")) c.topology = parse_topology_kind(t.at("kind").get<std::string>());
            if (t.contains("dims")) c.dims = read_dims(t.at("dims"));
            c.wireless_full = t.value("wireless_full", false);
            if (t.contains("links")) {
                const json& l = t.at("links");
                if (l.contains("optical")) read_link(l.at("optical"), c.links.optical);
                if (l.contains("wireless")) read_link(l.at("wireless"), c.links.wireless);
            }
        }
        if (c.dims.x <= 0 || c.dims.y <= 0 || c.dims.z <= 0) throw InputError("topology dims must be positive");

        if (j.contains("model")) {
            const json& m = j.at("model");
            c.model.packet_bytes = m.value("packet_bytes", c.model.packet_bytes);
            c.model.reliability_inflation = m.value("reliability_inflation", c.model.reliability_inflation);
            c.model.collective_min_delay = m.value("collective_min_delay", c.model.collective_min_delay);
        }
        c.model.validate();

        if (j.contains("paths")) {
            const json& p = j.at("paths");
            if (p.contains("output_dir")) c.output_dir = resolve(base_dir, p.at("output_dir").get<std::string>());
        } else {
            c.output_dir = base_dir / c.output_dir;
        }

        for (const json& a : j.value("applications", json::array())) {
            Application app;
            app.name = a.at("name").get<std::string>();
            if (app.name.empty() || app.name.find('/') != std::string::npos) {
                throw InputError("application name '" + app.name + "' is not a valid directory name");
            }
            if (a.contains("trace")) app.trace_file = existing(base_dir, a.at("trace").get<std::string>());
            if (a.contains("generate")) app.generate = read_generator(a.at("generate"));
            if (app.trace_file.has_value() == app.generate.has_value()) {
                throw InputError("application '" + app.name + "' needs exactly one of 'trace' or 'generate'");
            }
            if (a.contains("matrices")) {
                const json& m = a.at("matrices");
                if (m.contains("count")) app.count_matrix = existing(base_dir, m.at("count").get<std::string>());
                if (m.contains("volume")) app.volume_matrix = existing(base_dir, m.at("volume").get<std::string>());
            }
            c.applications.push_back(std::move(app));
        }

        const json grid = j.value("grid", json::object());
        const json algs = grid.value("algorithms", json("all"));
        if (algs.is_string() && algs.get<std::string>() == "all") {
            c.algorithms.assign(all_algorithms().begin(), all_algorithms().end());
        } else {
            for (const auto& name : algs.get<std::vector<std::string>>()) c.algorithms.push_back(parse_algorithm(name));
        }
        for (const auto& name : grid.value("kinds", std::vector<std::string>{"count", "volume"}))
            c.kinds.push_back(parse_matrix_kind(name));
        for (const auto& name : grid.value("topologies", std::vector<std::string>{"mesh", "torus", "haec"}))
            c.topologies.push_back(parse_topology_kind(name));
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed run configuration: ") + e.what());
    }
    if (c.algorithms.empty() || c.kinds.empty() || c.topologies.empty()) {
        throw InputError("experiment grid is empty");
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open run configuration " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str(), path.parent_path());
}

}  // namespace mapkit::cli
