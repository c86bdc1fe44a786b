// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. One PASS/FAIL line per criterion; exit status is the
// number of failed criteria (capped at 1). `--only N` runs a single one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "grid.hpp"
#include "mapkit/comm.hpp"
#include "mapkit/log.hpp"
#include "mapkit/mapping.hpp"
#include "mapkit/quality.hpp"
#include "mapkit/simkernel.hpp"
#include "mapkit/topology.hpp"
#include "mapkit/trace.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

using namespace mapkit;

const Dims k444{4, 4, 4};
constexpr TopologyKind kKinds[] = {TopologyKind::mesh, TopologyKind::torus, TopologyKind::haec_box};
constexpr TracePattern kPatterns[] = {TracePattern::ring, TracePattern::stencil7, TracePattern::random_sparse,
                                      TracePattern::cg_like};

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects the first few failure descriptions, counts the rest.
class Checker {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (ok) return;
        ++failures_;
        if (failures_ <= 5) notes_ += (notes_.empty() ? "" : "; ") + what;
    }
    Outcome done(const std::string& summary) const {
        if (failures_ == 0) return {true, summary + " (" + std::to_string(checks_) + " checks)"};
        return {false, std::to_string(failures_) + "/" + std::to_string(checks_) + " checks failed: " + notes_};
    }

private:
    long checks_ = 0;
    long failures_ = 0;
    std::string notes_;
};

bool is_permutation_of_nodes(const Mapping& m, int n) {
    if (m.size() != n) return false;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (NodeId node : m.assignment()) {
        if (node < 0 || node >= n || seen[static_cast<std::size_t>(node)]) return false;
        seen[static_cast<std::size_t>(node)] = 1;
    }
    return true;
}

std::vector<int> as_vector(const Mapping& m) { return {m.assignment().begin(), m.assignment().end()}; }

Topology machine(TopologyKind kind, Dims dims = k444, bool full = false) {
    return Topology::build(kind, dims, {}, full);
}

TraceParams trace_params() {
    TraceParams p;
    p.iters = 2;
    p.bytes = 8192;
    return p;
}

// (sum, printed CA) pairs for four applications, count and volume matrices.
Outcome criterion_1() {
    struct Column {
        const char* name;
        double sum;
        double printed_ca;
    };
    const Column columns[] = {
        {"count CG", 1279232, 312.313},
        {"count BT-MZ", 182910, 44.656},
        {"count AMG", 1257257, 306.948},
        {"count LULESH", 1692936, 413.314},
        {"volume CG", 75884703744.0, 18526539.000},
        {"volume BT-MZ", 4785761760.0, 1168398.867},
        {"volume AMG", 5431711224.0, 1326101.373},
        {"volume LULESH", 20161171008.0, 4922160.809},
    };
    Checker c;
    for (const Column& col : columns) {
        // Route the sum through the library on a 64x64 matrix so CA comes from compute_metrics.
        CommMatrix m(64, MatrixKind::volume);
        m.set(0, 1, col.sum);
        const double ca = compute_metrics(m, {}).ca;
        std::ostringstream what;
        what.precision(12);
        what << col.name << ": " << col.sum << "/4096 = " << ca << " vs printed " << col.printed_ca;
        c.expect(ca == col.sum / 4096.0 && std::abs(ca - col.printed_ca) <= 0.001, what.str());
    }
    return c.done("8 table columns");
}

Outcome criterion_2() {
    Checker c;
    std::mt19937_64 rng(2002);
    for (TopologyKind kind : kKinds) {
        const Topology t = machine(kind);
        for (int trial = 0; trial < 50; ++trial) {
            const CommMatrix m =
                oracle::random_matrix(64, trial % 2 ? MatrixKind::volume : MatrixKind::count, rng);
            for (Algorithm a : all_algorithms()) {
                const Mapping mp = generate_mapping(a, &m, t, 1000 + static_cast<std::uint64_t>(trial));
                c.expect(is_permutation_of_nodes(mp, 64),
                         std::string(to_string(a)) + " on " + std::string(to_string(kind)) + " trial " +
                             std::to_string(trial));
            }
        }
    }
    return c.done("12 algorithms x 3 topologies x 50 matrices");
}

Outcome criterion_3() {
    Checker c;
    std::mt19937_64 rng(3003);
    for (int trial = 0; trial < 200; ++trial) {
        const TopologyKind kind = kKinds[trial % 3];
        const bool full = kind == TopologyKind::haec_box && trial % 2 == 0;
        const Topology t = machine(kind, k444, full);
        const CommMatrix m = oracle::random_matrix(64, trial % 2 ? MatrixKind::volume : MatrixKind::count, rng);
        const std::vector<int> perm = oracle::random_permutation(64, rng);
        const double got = dilation(m, Mapping(perm, kind, k444), t);
        const double want = oracle::dilation(m, perm, kind, k444, full);
        c.expect(got == want, "trial " + std::to_string(trial) + " " + std::to_string(got) + " vs " +
                                  std::to_string(want));
    }
    return c.done("200 triples, exact");
}

Outcome criterion_4() {
    Checker c;
    for (TopologyKind kind : kKinds) {
        for (bool full : {false, true}) {
            if (full && kind != TopologyKind::haec_box) continue;
            const Topology t = machine(kind, k444, full);
            const auto bfs = oracle::bfs_distances(t);
            const std::string label = t.label();
            for (NodeId a = 0; a < 64; ++a) {
                for (NodeId b = 0; b < 64; ++b) {
                    const Route r = t.route(a, b);
                    const int d = t.distance(a, b);
                    const int closed = oracle::closed_form_distance(kind, k444, oracle::coord_of(a, k444),
                                                                    oracle::coord_of(b, k444), full);
                    bool chained = true;
                    NodeId at = a;
                    for (const Hop& h : r.hops) {
                        chained = chained && h.from == at && t.link(h.from, h.to).has_value();
                        at = h.to;
                    }
                    chained = chained && at == b;
                    c.expect(static_cast<int>(r.size()) == d && d == closed && chained &&
                                 (kind == TopologyKind::haec_box ? bfs[a][b] <= d : bfs[a][b] == d),
                             label + " " + std::to_string(a) + "->" + std::to_string(b));
                }
            }
        }
    }
    return c.done("64x64 pairs on mesh, torus, haec, haec-full");
}

// Shared by criteria 5 and 6: every pattern x algorithm x topology.
template <typename Fn>
void for_each_run(Fn&& fn) {
    for (TracePattern pat : kPatterns) {
        const Trace trace = gen_trace(pat, 64, trace_params(), 7);
        const MatrixPair pre = trace_matrices(trace, 64);
        for (TopologyKind kind : kKinds) {
            const Topology t = machine(kind);
            for (Algorithm a : all_algorithms()) {
                for (const CommMatrix* m : {&pre.count, &pre.volume}) {
                    const Mapping mp = generate_mapping(a, m, t);
                    const SimReport rep = simulate(trace, mp, t);
                    fn(pat, kind, a, *m, trace, mp, t, rep);
                }
            }
        }
    }
}

std::string run_label(TracePattern pat, TopologyKind kind, Algorithm a, const CommMatrix& m) {
    return std::string(to_string(pat)) + "/" + std::string(to_string(kind)) + "/" + std::string(to_string(a)) +
           "-" + std::string(to_string(m.kind()));
}

Outcome criterion_5() {
    Checker c;
    for_each_run([&](TracePattern pat, TopologyKind kind, Algorithm a, const CommMatrix& m, const Trace&,
                     const Mapping& mp, const Topology& t, const SimReport& rep) {
        const double pre = dilation(m, mp, t);
        const MatrixPair post = post_matrices(rep);
        const CommMatrix& post_m = m.kind() == MatrixKind::count ? post.count : post.volume;
        const double post_d = dilation(post_m, mp, t);
        const double counter = rep.post_dilation(m.kind());
        c.expect(pre == post_d && pre == counter, run_label(pat, kind, a, m) + " pre=" + std::to_string(pre) +
                                                      " post=" + std::to_string(counter));
    });
    return c.done("4 patterns x 12 algorithms x 3 topologies x 2 kinds");
}

Outcome criterion_6() {
    Checker c;
    for_each_run([&](TracePattern pat, TopologyKind kind, Algorithm a, const CommMatrix& m, const Trace& trace,
                     const Mapping&, const Topology&, const SimReport& rep) {
        std::uint64_t count = 0, bytes = 0;
        for (const auto& seq : trace.events)
            for (const TraceEvent& e : seq)
                if (e.op == OpKind::send || e.op == OpKind::isend) {
                    ++count;
                    bytes += e.bytes;
                }
        std::uint64_t traffic_count = 0, traffic_bytes = 0;
        for (const PairTraffic& p : rep.traffic) {
            traffic_count += p.count;
            traffic_bytes += p.bytes;
        }
        c.expect(rep.msg_count == count && rep.total_bytes == bytes && traffic_count == count &&
                     traffic_bytes == bytes,
                 run_label(pat, kind, a, m));
    });
    return c.done("message count and bytes");
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
    std::ostringstream out, err;
    const int rc = cli::run_cli(args, out, err);
    if (out_text) *out_text = out.str();
    if (rc != 0) std::cerr << "  cli " << args.front() << " failed: " << err.str();
    return rc;
}

// Drives the CLI end to end: trace -> matrices -> map per kind -> simulate.
Outcome criterion_7() {
    Checker c;
    testing::TempDir dir("accept7");
    const auto trace = dir.file("trace.jsonl");
    c.expect(cli({"gen-trace", "--pattern", "random-sparse", "--ranks", "64", "--iters", "2", "--seed", "11",
                  "--out", trace}) == 0,
             "gen-trace");
    for (const char* kind : {"count", "volume"})
        c.expect(cli({"trace-matrix", "--trace", trace, "--kind", kind, "--out",
                      dir.file(std::string(kind) + ".csv")}) == 0,
                 std::string("trace-matrix ") + kind);
    for (const char* topo : {"mesh", "torus", "haec"}) {
        for (const char* alg : {"peano", "hilbert", "gray", "sweep", "scan"}) {
            std::string map_text[2], sim_text[2];
            int i = 0;
            for (const char* kind : {"count", "volume"}) {
                const std::string stem = std::string(topo) + "-" + alg + "-" + kind;
                const auto map = dir.file(stem + ".map");
                const auto sim = dir.file(stem + ".sim.json");
                c.expect(cli({"map", "--topology", topo, "--algorithm", alg, "--matrix",
                              dir.file(std::string(kind) + ".csv"), "--kind", kind, "--out",
                              map}) == 0,
                         "map " + stem);
                c.expect(cli({"simulate", "--topology", topo, "--trace", trace, "--mapping", map,
                              "--out", sim}) == 0,
                         "simulate " + stem);
                map_text[i] = slurp(map);
                sim_text[i] = slurp(sim);
                ++i;
            }
            const std::string label = std::string(topo) + "/" + alg;
            c.expect(!map_text[0].empty() && map_text[0] == map_text[1], label + " map files differ");
            c.expect(!sim_text[0].empty() && sim_text[0] == sim_text[1], label + " sim reports differ");
        }
    }
    return c.done("5 curves x 3 topologies, via CLI");
}

Outcome criterion_8() {
    Checker c;
    for (TracePattern pat : kPatterns) {
        for (TopologyKind kind : kKinds) {
            const Topology t = machine(kind);
            for (Algorithm a : {Algorithm::hilbert, Algorithm::fhgreedy, Algorithm::bokhari, Algorithm::pacmap}) {
                // Regenerate everything per repetition so hidden state cannot leak between runs.
                std::string first;
                for (int rep = 0; rep < 3; ++rep) {
                    const Trace trace = gen_trace(pat, 64, trace_params(), 17);
                    const MatrixPair pre = trace_matrices(trace, 64);
                    const Mapping mp = generate_mapping(a, &pre.volume, t, 23);
                    const std::string json = report_to_json(simulate(trace, mp, t));
                    if (rep == 0) first = json;
                    c.expect(json == first, run_label(pat, kind, a, pre.volume) + " repetition " +
                                                std::to_string(rep));
                }
            }
        }
    }
    return c.done("3 repetitions per run");
}

// Frozen from 50-digit evaluation of the pipelined link formula.
Outcome criterion_9() {
    Checker c;
    const Topology mesh = machine(TopologyKind::mesh, Dims{4, 1, 1});
    auto rel = [](double got, long double want) {
        return static_cast<double>(std::fabs((static_cast<long double>(got) - want) / want));
    };
    auto check = [&](const std::string& what, double got, long double frozen, long double oracle) {
        std::ostringstream s;
        s.precision(17);
        s << what << " got " << got << " frozen " << static_cast<double>(frozen);
        c.expect(rel(got, frozen) <= 1e-12 && rel(got, oracle) <= 1e-12, s.str());
    };

    ModelConfig on;
    const Route one = mesh.route(0, 1);
    check("4096 B over one optical hop", transfer_time(4096, one, on), 1.310820042949673663708924e-7L,
          oracle::transfer_time(4096, one, on));

    ModelConfig off;
    off.reliability_inflation = false;
    const Route two = mesh.route(0, 2);
    check("8192 B over two optical hops, no inflation", transfer_time(8192, two, off), 3.93236e-7L,
          oracle::transfer_time(8192, two, off));

    Trace pair(2);
    TraceEvent s;
    s.rank = 0;
    s.op = OpKind::send;
    s.peer = 1;
    s.bytes = 4096;
    pair.push(s);
    TraceEvent r = s;
    r.rank = 1;
    r.op = OpKind::recv;
    r.peer = 0;
    pair.push(r);
    const Topology line = machine(TopologyKind::mesh, Dims{2, 1, 1});
    const SimReport rep = simulate(pair, Mapping({0, 1}, TopologyKind::mesh, Dims{2, 1, 1}), line);
    const long double single = oracle::transfer_time(4096, line.route(0, 1), on);
    check("blocking pair finish rank 0", rep.per_rank_finish.at(0), 1.310820042949673663708924e-7L, single);
    check("blocking pair finish rank 1", rep.per_rank_finish.at(1), 1.310820042949673663708924e-7L, single);
    check("blocking pair p2p_cost", rep.p2p_cost, 2.621640085899347327417849e-7L, 2 * single);
    check("blocking pair comm_model_time", rep.comm_model_time, 1.310820042949673663708924e-7L, single);
    c.expect(rep.msg_count == 1, "blocking pair msg_count");
    return c.done("3 examples vs frozen values and long-double oracle");
}

Outcome criterion_10() {
    Checker c;
    struct Instance {
        int n;
        Dims dims;
    };
    for (const Instance inst : {Instance{4, Dims{2, 2, 1}}, Instance{8, Dims{2, 2, 2}}}) {
        const Topology t = machine(TopologyKind::mesh, inst.dims);
        for (MatrixKind kind : {MatrixKind::count, MatrixKind::volume}) {
            const CommMatrix ring = oracle::ring_matrix(inst.n, 1.0, kind);
            const double best = oracle::optimal_dilation(ring, TopologyKind::mesh, inst.dims);
            bool attained = false;
            std::string got;
            for (Algorithm a : all_algorithms()) {
                const double d = dilation(ring, generate_mapping(a, &ring, t), t);
                got += std::string(to_string(a)) + "=" + std::to_string(static_cast<long>(d)) + " ";
                c.expect(d >= best, std::string(to_string(a)) + " below the brute-force optimum");
                if (d == best && (a == Algorithm::bipartition || a == Algorithm::greedy_allc ||
                                  a == Algorithm::pacmap))
                    attained = true;
            }
            if (inst.n == 4)
                c.expect(attained, "no partitioning algorithm reached optimum " + std::to_string(best) + ": " + got);
        }
    }
    return c.done("4-ring on 2x2x1 and 8-ring on 2x2x2");
}

Outcome criterion_11() {
    Checker c;
    const Topology mesh = machine(TopologyKind::mesh);
    for (Algorithm a : {Algorithm::hilbert, Algorithm::scan}) {
        const auto nodes = as_vector(generate_mapping(a, nullptr, mesh));
        for (int r = 0; r + 1 < 64; ++r)
            c.expect(mesh.distance(nodes[r], nodes[r + 1]) == 1,
                     std::string(to_string(a)) + " step " + std::to_string(r));
    }
    const auto gray = as_vector(generate_mapping(Algorithm::gray, nullptr, mesh));
    for (int r = 0; r + 1 < 64; ++r) {
        const Coord a = mesh.coord(gray[r]), b = mesh.coord(gray[r + 1]);
        c.expect((a.x != b.x) + (a.y != b.y) + (a.z != b.z) == 1, "gray step " + std::to_string(r));
    }
    const std::string golden = slurp(std::filesystem::path(MAPKIT_FIXTURE_DIR) / "sweep_4x4x4.map");
    c.expect(!golden.empty() && mapping_to_string(generate_mapping(Algorithm::sweep, nullptr, mesh)) == golden,
             "sweep differs from golden fixture");
    return c.done("hilbert, scan, gray steps and sweep fixture");
}

Outcome criterion_12() {
    Checker c;
    const Topology mesh = machine(TopologyKind::mesh);
    const Topology torus = machine(TopologyKind::torus);
    const Topology haec = machine(TopologyKind::haec_box, k444, true);
    std::mt19937_64 rng(1212);
    for (int trial = 0; trial < 100; ++trial) {
        const CommMatrix m = oracle::random_matrix(64, trial % 2 ? MatrixKind::volume : MatrixKind::count, rng);
        const std::vector<int> perm = oracle::random_permutation(64, rng);
        const double dm = dilation(m, Mapping(perm, TopologyKind::mesh, k444), mesh);
        const double dt = dilation(m, Mapping(perm, TopologyKind::torus, k444), torus);
        const double dh = dilation(m, Mapping(perm, TopologyKind::haec_box, k444), haec);
        c.expect(dh <= dt && dt <= dm, "trial " + std::to_string(trial));
    }
    return c.done("100 matrix/mapping pairs");
}

Outcome criterion_13() {
    Checker c;
    testing::TempDir dir("accept13");
    const auto config = dir.file("run.json");
    {
        std::ofstream out(config);
        out << R"({"topology": {"dims": [4, 4, 4]},
  "paths": {"output_dir": ")" << dir.file("out") << R"("},
  "applications": [{"name": "synthetic", "generate": {"pattern": "stencil7", "iters": 2, "seed": 5}}]})";
    }
    c.expect(cli({"grid", "--config", config}) == 0, "grid command");
    const std::string csv = slurp(std::filesystem::path(dir.file("out")) / "experiments.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    c.expect(line.rfind("app,topology,algorithm,kind,", 0) == 0, "header: " + line);
    std::set<std::string> cells;
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        ++rows;
        std::istringstream fields(line);
        std::string app, topo, alg, kind;
        std::getline(fields, app, ',');
        std::getline(fields, topo, ',');
        std::getline(fields, alg, ',');
        std::getline(fields, kind, ',');
        cells.insert(topo + "/" + alg + "/" + kind);
        c.expect(line.size() > 5 && line.substr(line.size() - 4) == "true", "prepost_ok false: " + line);
    }
    c.expect(rows == 72, "expected 72 rows, got " + std::to_string(rows));
    c.expect(cells.size() == 72, "distinct cells " + std::to_string(cells.size()));
    return c.done("72 rows, 12 x 2 x 3");
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::cerr << "usage: mapkit_acceptance [--only N]\n";
            return 2;
        }
    }
    const std::vector<std::function<Outcome()>> criteria = {
        criterion_1, criterion_2,  criterion_3,  criterion_4,  criterion_5,  criterion_6, criterion_7,
        criterion_8, criterion_9, criterion_10, criterion_11, criterion_12, criterion_13,
    };
    if (only < 0 || only > static_cast<int>(criteria.size())) {
        std::cerr << "no criterion " << only << "\n";
        return 2;
    }
    // Warnings about all-zero matrices are expected noise here.
    set_warning_handler([](std::string_view) {});

    int failed = 0;
    for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
        if (only != 0 && n != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[static_cast<std::size_t>(n - 1)]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream t;
        t.precision(3);
        t << std::fixed << secs;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << o.detail << " [" << t.str()
                  << " s]\n";
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
