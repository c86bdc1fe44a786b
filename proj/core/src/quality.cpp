// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "mapkit/quality.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "mapkit/error.hpp"
#include "mapkit/format.hpp"
#include "mapkit/log.hpp"

namespace mapkit {
namespace {

void require_consistent(const CommMatrix& m, const Mapping& mapping, const Topology& topology) {
    if (m.size() != mapping.size() || mapping.size() != topology.node_count()) {
        throw InputError("size mismatch: matrix " + std::to_string(m.size()) + ", mapping " +
                         std::to_string(mapping.size()) + ", topology " +
                         std::to_string(topology.node_count()) + " nodes");
    }
    if (mapping.dims() != topology.dims()) {
        throw InputError("mapping was built for " + to_string(mapping.dims()) +
                         " but topology is " + to_string(topology.dims()));
    }
}

}  // namespace

double dilation(const CommMatrix& m, const Mapping& mapping, const Topology& topology) {
    require_consistent(m, mapping, topology);
    double d = 0.0;
    const int n = m.size();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double w = m(i, j);
            if (w == 0.0) continue;
            d += topology.distance(mapping.node_of(i), mapping.node_of(j)) * w;
        }
    }
    return d;
}

std::vector<LinkLoad> link_loads(const CommMatrix& m, const Mapping& mapping,
                                 const Topology& topology) {
    require_consistent(m, mapping, topology);
    std::map<std::pair<NodeId, NodeId>, double> loads;
    for (NodeId a = 0; a < topology.node_count(); ++a) {
        for (NodeId b : topology.neighbors(a)) loads[{a, b}] = 0.0;
    }
    const int n = m.size();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double w = m(i, j);
            if (w == 0.0) continue;
            for (const Hop& h : topology.route(mapping.node_of(i), mapping.node_of(j)).hops) {
                loads[{h.from, h.to}] += w;
            }
        }
    }
    std::vector<LinkLoad> out;
    out.reserve(loads.size());
    for (const auto& [link, load] : loads) out.push_back(LinkLoad{link.first, link.second, load});
    return out;
}

HopStats hop_stats(const CommMatrix& m, const Mapping& mapping, const Topology& topology) {
    HopStats s;
    s.total_hops = dilation(m, mapping, topology);
    const double total = m.sum();
    if (total == 0.0) {
        warn("hop statistics on an empty matrix; average reported as 0");
        return s;
    }
    s.avg_hops = s.total_hops / total;
    return s;
}

QualityReport evaluate_quality(const CommMatrix& m, const Mapping& mapping,
                               const Topology& topology) {
    QualityReport r;
    r.kind = m.kind();
    r.dilation = dilation(m, mapping, topology);
    const HopStats hs = hop_stats(m, mapping, topology);
    r.total_hops = hs.total_hops;
    r.avg_hops_per_message = hs.avg_hops;
    r.link_loads = link_loads(m, mapping, topology);
    return r;
}

std::string quality_to_json(const QualityReport& report, const RunLabels& labels) {
    nlohmann::json j;
    j["run_id"] = labels.run_id;
    j["app"] = labels.app;
    j["algorithm"] = labels.algorithm;
    j["kind"] = std::string(to_string(report.kind));
    j["topology"] = labels.topology;
    j["dilation"] = report.dilation;
    j["total_hops"] = report.total_hops;
    j["avg_hops"] = report.avg_hops_per_message;
    nlohmann::json links = nlohmann::json::array();
    for (const LinkLoad& l : report.link_loads) {
        if (l.load != 0.0) links.push_back({l.from, l.to, l.load});
    }
    j["link_loads"] = std::move(links);
    return j.dump(2) + "\n";
}

QualitySummary parse_quality_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        QualitySummary s;
        s.labels.run_id = j.value("run_id", "");
        s.labels.app = j.value("app", "");
        s.labels.algorithm = j.value("algorithm", "");
        s.labels.kind = j.at("kind").get<std::string>();
        s.labels.topology = j.value("topology", "");
        s.kind = parse_matrix_kind(s.labels.kind);
        s.dilation = j.at("dilation").get<double>();
        s.total_hops = j.value("total_hops", 0.0);
        s.avg_hops = j.value("avg_hops", 0.0);
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed quality report: ") + e.what());
    }
}

std::string quality_csv_header() {
    return "run_id,app,algorithm,kind,topology,dilation,total_hops,avg_hops";
}

std::string quality_csv_row(const QualityReport& report, const RunLabels& labels) {
    return labels.run_id + "," + labels.app + "," + labels.algorithm + "," +
           std::string(to_string(report.kind)) + "," + labels.topology + "," +
           format_double(report.dilation) + "," + format_double(report.total_hops) + "," +
           format_double(report.avg_hops_per_message);
}

}  // namespace mapkit
