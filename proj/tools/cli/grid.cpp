// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "grid.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <thread>
#include <tuple>

#include "mapkit/error.hpp"
#include "mapkit/format.hpp"
#include "mapkit/quality.hpp"

namespace mapkit::cli {
namespace {

struct PreparedApp {
    std::string name;
    Trace trace;
    MatrixPair from_trace;
    std::map<MatrixKind, CommMatrix> inputs;
};

struct Cell {
    std::size_t app = 0;
    TopologyKind topology = TopologyKind::mesh;
    Algorithm algorithm = Algorithm::sweep;
    MatrixKind kind = MatrixKind::count;
};

const CommMatrix& of_kind(const MatrixPair& mp, MatrixKind kind) {
    return kind == MatrixKind::count ? mp.count : mp.volume;
}

PreparedApp prepare(const Application& app, int nodes) {
    PreparedApp p;
    p.name = app.name;
    p.trace = app.trace_file ? load_trace(*app.trace_file)
                             : gen_trace(app.generate->pattern, nodes, app.generate->params, app.generate->seed);
    if (p.trace.ranks > nodes) {
        throw InputError("application '" + app.name + "' has " + std::to_string(p.trace.ranks) +
                         " ranks but the topology has " + std::to_string(nodes) + " nodes");
    }
    p.from_trace = trace_matrices(p.trace, nodes);
    auto input = [&](const std::optional<std::filesystem::path>& file, MatrixKind kind) {
        if (!file) return of_kind(p.from_trace, kind);
        CommMatrix m = load_matrix_csv(*file, kind);
        if (m.size() != nodes) {
            throw InputError(file->string() + ": matrix is " + std::to_string(m.size()) + "x" +
                             std::to_string(m.size()) + " but the topology has " + std::to_string(nodes) +
                             " nodes");
        }
        return m;
    };
    p.inputs.emplace(MatrixKind::count, input(app.count_matrix, MatrixKind::count));
    p.inputs.emplace(MatrixKind::volume, input(app.volume_matrix, MatrixKind::volume));
    return p;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

}  // namespace

std::vector<ExperimentRow> run_grid(const RunConfig& config, int jobs) {
    if (config.applications.empty()) throw InputError("run configuration lists no applications");
    std::map<TopologyKind, Topology> topologies;
    for (TopologyKind k : config.topologies) {
        topologies.emplace(k, Topology::build(k, config.dims, config.links, config.wireless_full));
    }
    const int nodes = config.dims.volume();

    std::vector<PreparedApp> apps;
    for (const Application& a : config.applications) apps.push_back(prepare(a, nodes));

    std::vector<Cell> cells;
    for (std::size_t a = 0; a < apps.size(); ++a)
        for (TopologyKind t : config.topologies)
            for (Algorithm alg : config.algorithms)
                for (MatrixKind kind : config.kinds) cells.push_back(Cell{a, t, alg, kind});

    std::vector<ExperimentRow> rows(cells.size());
    std::vector<std::exception_ptr> errors(cells.size());

    auto run_cell = [&](std::size_t index) {
        const Cell& c = cells[index];
        const PreparedApp& app = apps[c.app];
        const Topology& topo = topologies.at(c.topology);
        const CommMatrix& matrix = app.inputs.at(c.kind);

        const Mapping mapping = generate_mapping(c.algorithm, &matrix, topo, config.seed);
        const QualityReport quality = evaluate_quality(matrix, mapping, topo);
        const SimReport sim = simulate(app.trace, mapping, topo, config.model);
        const double pre = dilation(of_kind(app.from_trace, c.kind), mapping, topo);

        ExperimentRow& row = rows[index];
        row.app = app.name;
        row.topology = std::string(to_string(c.topology));
        row.algorithm = std::string(to_string(c.algorithm));
        row.kind = std::string(to_string(c.kind));
        row.dilation = quality.dilation;
        row.total_hops = quality.total_hops;
        row.avg_hops = quality.avg_hops_per_message;
        row.comm_model_time = sim.comm_model_time;
        row.p2p_cost = sim.p2p_cost;
        row.parallel_cost = sim.parallel_cost;
        row.prepost_ok = pre == sim.post_dilation(c.kind);

        const auto dir = config.output_dir / row.app / row.topology;
        const std::string stem = row.algorithm + "-" + row.kind;
        const RunLabels labels{row.app + "/" + row.topology + "/" + stem, row.app, row.algorithm, row.kind,
                               row.topology};
        write_mapping(mapping, dir / (stem + ".map"));
        write_text(dir / (stem + ".quality.json"), quality_to_json(quality, labels));
        write_text(dir / (stem + ".sim.json"), report_to_json(sim));
    };

    for (const PreparedApp& app : apps)
        for (TopologyKind t : config.topologies)
            std::filesystem::create_directories(config.output_dir / app.name / std::string(to_string(t)));

    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                run_cell(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::sort(rows.begin(), rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
        return std::tie(a.app, a.topology, a.algorithm, a.kind) < std::tie(b.app, b.topology, b.algorithm, b.kind);
    });
    write_text(config.output_dir / "experiments.csv", experiments_csv(rows));
    return rows;
}

std::string experiments_csv(const std::vector<ExperimentRow>& rows) {
    std::string out =
        "app,topology,algorithm,kind,dilation,total_hops,avg_hops,comm_model_time,p2p_cost,parallel_cost,"
        "prepost_ok\n";
    for (const ExperimentRow& r : rows) {
        out += r.app + "," + r.topology + "," + r.algorithm + "," + r.kind + "," + format_double(r.dilation) + "," +
               format_double(r.total_hops) + "," + format_double(r.avg_hops) + "," +
               format_double(r.comm_model_time) + "," + format_double(r.p2p_cost) + "," +
               format_double(r.parallel_cost) + "," + (r.prepost_ok ? "true" : "false") + "\n";
    }
    return out;
}

}  // namespace mapkit::cli
