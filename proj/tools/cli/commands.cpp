// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "grid.hpp"
#include "mapkit/comm.hpp"
#include "mapkit/error.hpp"
#include "mapkit/format.hpp"
#include "mapkit/log.hpp"
#include "mapkit/mapping.hpp"
#include "mapkit/quality.hpp"
#include "mapkit/simkernel.hpp"
#include "mapkit/trace.hpp"
#include "run_config.hpp"

namespace mapkit::cli {
namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

class WarningsTo {
public:
    explicit WarningsTo(std::ostream& err)
        : previous_(set_warning_handler([&err](std::string_view msg) { err << "warning: " << msg << '\n'; })) {}
    ~WarningsTo() { set_warning_handler(previous_); }
    WarningsTo(const WarningsTo&) = delete;
    WarningsTo& operator=(const WarningsTo&) = delete;

private:
    WarningHandler previous_;
};

// Machine flags shared by the single-run commands; --config supplies defaults.
struct MachineFlags {
    std::string config;
    std::string topology = "torus";
    std::string dims = "4,4,4";
    bool wireless_full = false;
    std::uint64_t packet_bytes = 4096;
    bool no_reliability = false;
    double coll_delay = 0.0;
    std::uint64_t seed = kDefaultSeed;

    CLI::Option* topology_opt = nullptr;
    CLI::Option* dims_opt = nullptr;
    CLI::Option* wireless_opt = nullptr;
    CLI::Option* packet_opt = nullptr;
    CLI::Option* reliability_opt = nullptr;
    CLI::Option* delay_opt = nullptr;
    CLI::Option* seed_opt = nullptr;

    void add_topology(CLI::App* cmd) {
        cmd->add_option("--config", config, "JSON run configuration supplying defaults");
        topology_opt = cmd->add_option("--topology", topology, "mesh, torus or haec");
        dims_opt = cmd->add_option("--dims", dims, "X,Y,Z");
        wireless_opt = cmd->add_flag("--wireless-full", wireless_full, "HAEC wireless reaches every board");
    }
    void add_model(CLI::App* cmd) {
        packet_opt = cmd->add_option("--packet-bytes", packet_bytes, "packet size in bytes");
        reliability_opt = cmd->add_flag("--no-reliability", no_reliability, "disable BER inflation");
        delay_opt = cmd->add_option("--coll-delay", coll_delay, "collective minimum delay in seconds");
    }
    void add_seed(CLI::App* cmd) { seed_opt = cmd->add_option("--seed", seed, "RNG seed (default 42 or MAPKIT_SEED)"); }

    RunConfig base() const {
        RunConfig c;
        if (!config.empty()) c = load_run_config(config);
        else c.seed = resolve_seed(std::nullopt);
        if (topology_opt && topology_opt->count()) c.topology = parse_topology_kind(topology);
        if (dims_opt && dims_opt->count()) c.dims = parse_dims(dims);
        if (wireless_opt && wireless_opt->count()) c.wireless_full = wireless_full;
        if (packet_opt && packet_opt->count()) c.model.packet_bytes = packet_bytes;
        if (reliability_opt && reliability_opt->count()) c.model.reliability_inflation = !no_reliability;
        if (delay_opt && delay_opt->count()) c.model.collective_min_delay = coll_delay;
        if (seed_opt && seed_opt->count()) c.seed = seed;
        c.model.validate();
        return c;
    }
    Topology build() const {
        const RunConfig c = base();
        return Topology::build(c.topology, c.dims, c.links, c.wireless_full);
    }
};

CommMatrix load_sized(const std::string& path, MatrixKind kind, const Topology& topo) {
    CommMatrix m = load_matrix_csv(path, kind);
    if (m.size() != topo.node_count()) {
        throw InputError(path + ": " + std::to_string(m.size()) + " ranks but topology " + topo.label() + " has " +
                         std::to_string(topo.node_count()) + " nodes");
    }
    return m;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    WarningsTo warnings(err);

    CLI::App app{"mapkit: process mapping, dilation and trace-driven simulation"};
    app.name("mapkit");
    app.require_subcommand(1);
    app.set_version_flag("--version", "mapkit 0.1.0");

    std::function<int()> action;

    // metrics
    std::string m_matrix, m_kind = "count", m_ks, m_format = "both";
    auto* metrics = app.add_subcommand("metrics", "communication matrix statistics");
    metrics->add_option("--matrix", m_matrix, "matrix CSV")->required();
    metrics->add_option("--kind", m_kind, "count or volume");
    metrics->add_option("--ks", m_ks, "comma-separated SP(k) block counts (default: 2,4,8 where they divide n)");
    metrics->add_option("--format", m_format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
    metrics->callback([&] {
        action = [&] {
            const CommMatrix m = load_matrix_csv(m_matrix, parse_matrix_kind(m_kind));
            std::vector<int> ks;
            if (m_ks.empty()) {
                for (int k : {2, 4, 8})
                    if (m.size() % k == 0) ks.push_back(k);
            } else {
                for (auto field : split(m_ks, ',')) ks.push_back(std::stoi(std::string(trim(field))));
            }
            const MetricsReport r = compute_metrics(m, ks);
            if (m_format != "csv") out << r.to_json() << '\n';
            if (m_format != "json") out << r.to_csv();
            return int{kExitOk};
        };
    });

    // map
    MachineFlags map_flags;
    std::string p_algorithm, p_matrix = "none", p_kind = "count", p_out;
    auto* map = app.add_subcommand("map", "generate a mapping file");
    map->add_option("--algorithm", p_algorithm, "mapping algorithm")->required();
    map->add_option("--matrix", p_matrix, "matrix CSV, or none for oblivious algorithms");
    map->add_option("--kind", p_kind, "count or volume");
    map->add_option("--out", p_out, "output mapping file (default stdout)");
    map_flags.add_topology(map);
    map_flags.add_seed(map);
    map->callback([&] {
        action = [&] {
            const RunConfig c = map_flags.base();
            const Topology topo = Topology::build(c.topology, c.dims, c.links, c.wireless_full);
            const Algorithm alg = parse_algorithm(p_algorithm);
            std::optional<CommMatrix> m;
            if (p_matrix != "none" && !is_oblivious(alg)) m = load_sized(p_matrix, parse_matrix_kind(p_kind), topo);
            if (!m && !is_oblivious(alg)) {
                throw InputError("algorithm " + std::string(to_string(alg)) + " needs --matrix");
            }
            const Mapping mapping = generate_mapping(alg, m ? &*m : nullptr, topo, c.seed);
            if (p_out.empty()) write_mapping(mapping, out);
            else write_mapping(mapping, std::filesystem::path(p_out));
            return int{kExitOk};
        };
    });

    // dilation
    MachineFlags dil_flags;
    std::string d_matrix, d_kind = "count", d_mapping, d_out;
    auto* dil = app.add_subcommand("dilation", "pre-simulation quality of a mapping");
    dil->add_option("--matrix", d_matrix, "matrix CSV")->required();
    dil->add_option("--kind", d_kind, "count or volume");
    dil->add_option("--mapping", d_mapping, "mapping file")->required();
    dil->add_option("--out", d_out, "write the quality report JSON here");
    dil_flags.add_topology(dil);
    dil->callback([&] {
        action = [&] {
            const Topology topo = dil_flags.build();
            const CommMatrix m = load_sized(d_matrix, parse_matrix_kind(d_kind), topo);
            const Mapping mapping = read_mapping(std::filesystem::path(d_mapping), topo);
            const QualityReport q = evaluate_quality(m, mapping, topo);
            const RunLabels labels{std::filesystem::path(d_mapping).stem().string(), "",
                                   mapping.meta().algorithm, std::string(to_string(m.kind())), topo.label()};
            out << quality_csv_header() << '\n' << quality_csv_row(q, labels) << '\n';
            if (!d_out.empty()) write_file(d_out, quality_to_json(q, labels));
            return int{kExitOk};
        };
    });

    // simulate
    MachineFlags sim_flags;
    std::string s_trace, s_mapping, s_out;
    auto* sim = app.add_subcommand("simulate", "replay a trace on a mapped topology");
    sim->add_option("--trace", s_trace, "trace file (JSONL)")->required();
    sim->add_option("--mapping", s_mapping, "mapping file")->required();
    sim->add_option("--out", s_out, "write the report JSON here and print a CSV row");
    sim_flags.add_topology(sim);
    sim_flags.add_model(sim);
    sim->callback([&] {
        action = [&] {
            const RunConfig c = sim_flags.base();
            const Topology topo = Topology::build(c.topology, c.dims, c.links, c.wireless_full);
            const Trace trace = load_trace(s_trace);
            const Mapping mapping = read_mapping(std::filesystem::path(s_mapping), topo);
            const SimReport r = simulate(trace, mapping, topo, c.model);
            if (s_out.empty()) {
                out << report_to_json(r);
            } else {
                write_file(s_out, report_to_json(r));
                out << report_csv_header() << '\n' << report_csv_row(r) << '\n';
            }
            return int{kExitOk};
        };
    });

    // compare
    std::string c_pre, c_post, c_matrix, c_kind;
    auto* cmp = app.add_subcommand("compare", "check pre- against post-simulation metrics");
    cmp->add_option("--pre", c_pre, "quality report JSON")->required();
    cmp->add_option("--post", c_post, "simulation report JSON")->required();
    cmp->add_option("--matrix", c_matrix, "matrix CSV to check against the simulated traffic");
    cmp->add_option("--kind", c_kind, "matrix kind (default: the quality report's)");
    cmp->callback([&] {
        action = [&] {
            const QualitySummary pre = parse_quality_json(read_file(c_pre));
            const SimReport post = parse_report_json(read_file(c_post));
            const MatrixKind kind = c_kind.empty() ? pre.kind : parse_matrix_kind(c_kind);
            std::vector<std::string> diffs;
            bool matrices_agree = false;
            if (!c_matrix.empty()) {
                const CommMatrix m = load_matrix_csv(c_matrix, kind);
                const MatrixPair pm = post_matrices(post);
                const CommMatrix& sim_m = kind == MatrixKind::count ? pm.count : pm.volume;
                if (m.size() != sim_m.size()) {
                    diffs.push_back("matrix size: pre=" + std::to_string(m.size()) +
                                    " post=" + std::to_string(sim_m.size()));
                } else {
                    int shown = 0;
                    for (int i = 0; i < m.size(); ++i)
                        for (int j = 0; j < m.size(); ++j)
                            if (m(i, j) != sim_m(i, j) && shown++ < 10)
                                diffs.push_back("matrix[" + std::to_string(i) + "][" + std::to_string(j) +
                                                "]: pre=" + format_double(m(i, j)) +
                                                " post=" + format_double(sim_m(i, j)));
                    matrices_agree = shown == 0;
                }
            }
            const double post_dil = post.post_dilation(kind);
            if (pre.dilation != post_dil) {
                diffs.push_back("dilation: pre=" + format_double(pre.dilation) + " post=" + format_double(post_dil));
                if (matrices_agree) diffs.push_back("internal inconsistency: matrices agree but dilation differs");
            }
            if (diffs.empty()) {
                out << "OK\n";
                return int{kExitOk};
            }
            for (const auto& d : diffs) out << "MISMATCH " << d << '\n';
            return int{kExitMismatch};
        };
    });

    // grid
    std::string g_config, g_out;
    int g_jobs = 1;
    auto* grid = app.add_subcommand("grid", "run the full experiment grid");
    grid->add_option("--config", g_config, "JSON run configuration")->required();
    grid->add_option("--jobs", g_jobs, "parallel grid cells")->check(CLI::PositiveNumber);
    grid->add_option("--out", g_out, "output directory (overrides paths.output_dir)");
    grid->callback([&] {
        action = [&] {
            RunConfig c = load_run_config(g_config);
            if (!g_out.empty()) c.output_dir = g_out;
            const auto rows = run_grid(c, g_jobs);
            out << "wrote " << rows.size() << " rows to " << (c.output_dir / "experiments.csv").string() << '\n';
            return int{kExitOk};
        };
    });

    // gen-trace
    std::string t_pattern, t_out, t_grid;
    int t_ranks = 0;
    TraceParams t_params;
    std::uint64_t t_seed = kDefaultSeed;
    CLI::Option* t_seed_opt = nullptr;
    auto* gen = app.add_subcommand("gen-trace", "generate a synthetic trace");
    gen->add_option("--pattern", t_pattern, "ring, stencil7, random-sparse or cg-like")->required();
    gen->add_option("--ranks", t_ranks, "number of ranks")->required()->check(CLI::PositiveNumber);
    gen->add_option("--iters", t_params.iters, "iterations");
    gen->add_option("--bytes", t_params.bytes, "bytes per message");
    gen->add_option("--compute-ns", t_params.compute_ns, "compute time per iteration in ns");
    gen->add_option("--degree", t_params.degree, "random-sparse out-degree");
    gen->add_option("--grid", t_grid, "stencil7 process grid X,Y,Z");
    t_seed_opt = gen->add_option("--seed", t_seed, "RNG seed");
    gen->add_option("--out", t_out, "output trace file (default stdout)");
    gen->callback([&] {
        action = [&] {
            if (!t_grid.empty()) t_params.grid = parse_dims(t_grid);
            const std::uint64_t seed = resolve_seed(t_seed_opt->count() ? std::optional(t_seed) : std::nullopt);
            const Trace t = gen_trace(parse_pattern(t_pattern), t_ranks, t_params, seed);
            if (t_out.empty()) write_trace(t, out);
            else write_trace(t, std::filesystem::path(t_out));
            return int{kExitOk};
        };
    });

    // trace-matrix
    std::string x_trace, x_kind = "count", x_out;
    int x_ranks = -1;
    auto* tm = app.add_subcommand("trace-matrix", "communication matrix of a trace");
    tm->add_option("--trace", x_trace, "trace file")->required();
    tm->add_option("--kind", x_kind, "count or volume");
    tm->add_option("--ranks", x_ranks, "matrix size (default: trace ranks)");
    tm->add_option("--out", x_out, "output CSV (default stdout)");
    tm->callback([&] {
        action = [&] {
            const MatrixPair mp = trace_matrices(load_trace(x_trace), x_ranks);
            const CommMatrix& m = parse_matrix_kind(x_kind) == MatrixKind::count ? mp.count : mp.volume;
            if (x_out.empty()) {
                write_matrix_csv(m, out);
            } else {
                std::ofstream f(x_out, std::ios::binary);
                if (!f) throw InputError("cannot write " + x_out);
                write_matrix_csv(m, f);
            }
            return int{kExitOk};
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? int{kExitOk} : int{kExitInput};
    }

    try {
        return action ? action() : int{kExitInput};
    } catch (const DeadlockError& e) {
        err << "error: " << e.what() << '\n' << "stuck ranks:";
        for (int r : e.stuck_ranks()) err << ' ' << r;
        err << '\n';
        return kExitDeadlock;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
}

}  // namespace mapkit::cli
