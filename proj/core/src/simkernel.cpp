// SPDX-FileCopyrightText: © 2026 The mapkit Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "mapkit/simkernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include <json.hpp>

#include "mapkit/error.hpp"
#include "mapkit/format.hpp"

namespace mapkit {

void ModelConfig::validate() const {
    if (packet_bytes == 0) throw InputError("packet_bytes must be positive");
    if (!std::isfinite(collective_min_delay) || collective_min_delay < 0.0) {
        throw InputError("collective_min_delay must be a non-negative number of seconds");
    }
}

PipelinedLinkModel::PipelinedLinkModel(ModelConfig config) : config_(config) {
    config_.validate();
}

double PipelinedLinkModel::transfer_time(std::uint64_t bytes, const Route& route) const {
    return mapkit::transfer_time(bytes, route, config_);
}

double transfer_time(std::uint64_t bytes, const Route& route, const ModelConfig& config) {
    config.validate();
    if (route.empty()) {
        if (bytes > 0) throw SimulationError("transfer of " + std::to_string(bytes) +
                                             " bytes over an empty route");
        return 0.0;
    }
    const double packet_bits = 8.0 * static_cast<double>(config.packet_bytes);
    double sum = 0.0;
    double slowest = 0.0;
    for (const Hop& h : route.hops) {
        sum += h.link.latency;
        if (bytes == 0) continue;
        // (1 - BER)^(-8P) without cancellation for tiny BER.
        const double inflation =
            config.reliability_inflation ? std::exp(-packet_bits * std::log1p(-h.link.bit_error_rate))
                                         : 1.0;
        const double s = packet_bits * inflation / h.link.bandwidth;
        sum += s;
        slowest = std::max(slowest, s);
    }
    if (bytes == 0) return sum;
    const std::uint64_t packets = (bytes + config.packet_bytes - 1) / config.packet_bytes;
    return sum + static_cast<double>(packets - 1) * slowest;
}

namespace {

using ChannelKey = std::tuple<int, int, int>;  // src, dst, tag

struct Channel {
    std::vector<double> arrivals;  // in send order
    std::size_t posted = 0;        // receives posted so far
};

struct Request {
    bool is_recv = false;
    ChannelKey channel;
    std::size_t index = 0;
};

struct RankState {
    std::size_t pc = 0;
    double clock = 0.0;
    std::map<int, Request> requests;
};

class Replay {
public:
    Replay(const Trace& trace, const Mapping& mapping, const Topology& topology,
           const LinkModel& model, const ModelConfig& config)
        : trace_(trace), mapping_(mapping), topology_(topology), model_(model), config_(config),
          ranks_(static_cast<std::size_t>(trace.ranks)) {
        for (const auto& seq : trace.events)
            for (const TraceEvent& e : seq)
                if (e.op == OpKind::coll) ++participants_[e.coll_id];
    }

    SimReport run() {
        for (;;) {
            bool progress = false;
            for (int r = 0; r < trace_.ranks; ++r) progress |= advance(r);
            progress |= release_collectives();
            if (!progress) break;
        }
        check_finished();
        return finish();
    }

private:
    const TraceEvent* current(int r) const {
        const auto& seq = trace_.events[static_cast<std::size_t>(r)];
        const std::size_t pc = ranks_[static_cast<std::size_t>(r)].pc;
        return pc < seq.size() ? &seq[pc] : nullptr;
    }

    const Route& route(int src, int dst) {
        const NodeId a = mapping_.node_of(src);
        const NodeId b = mapping_.node_of(dst);
        const std::int64_t key = static_cast<std::int64_t>(a) * topology_.node_count() + b;
        auto it = routes_.find(key);
        if (it == routes_.end()) it = routes_.emplace(key, topology_.route(a, b)).first;
        return it->second;
    }

    // Injects a message departing now; returns its transfer time.
    double deliver(int src, const TraceEvent& e) {
        const Route& path = route(src, e.peer);
        const double t = path.empty() ? 0.0 : model_.transfer_time(e.bytes, path);
        const double depart = ranks_[static_cast<std::size_t>(src)].clock;
        channels_[{src, e.peer, e.tag}].arrivals.push_back(depart + t);

        report_.msg_count += 1;
        report_.total_bytes += e.bytes;
        report_.comm_model_time += t;
        const auto hops = static_cast<std::uint64_t>(path.size());
        report_.post_dilation_count += hops;
        report_.post_dilation_volume += hops * e.bytes;
        for (const Hop& h : path.hops) link_bytes_[{h.from, h.to}] += e.bytes;
        if (src != e.peer) {
            auto& cell = traffic_[{src, e.peer}];
            cell.first += 1;
            cell.second += e.bytes;
        }
        return t;
    }

    void wait_until(RankState& s, double arrival) {
        const double next = std::max(s.clock, arrival);
        report_.p2p_cost += next - s.clock;
        s.clock = next;
    }

    // Runs rank r until it blocks or ends. Returns whether any event completed.
    bool advance(int r) {
        RankState& s = ranks_[static_cast<std::size_t>(r)];
        bool progress = false;
        while (const TraceEvent* e = current(r)) {
            switch (e->op) {
                case OpKind::compute:
                    s.clock += static_cast<double>(e->dur_ns) * 1e-9;
                    break;
                case OpKind::send: {
                    const double t = deliver(r, *e);
                    report_.p2p_cost += t;
                    s.clock += t;
                    break;
                }
                case OpKind::isend:
                    deliver(r, *e);
                    s.requests[e->req] = Request{false, {r, e->peer, e->tag}, 0};
                    break;
                case OpKind::recv: {
                    Channel& ch = channels_[{e->peer, r, e->tag}];
                    if (ch.arrivals.size() <= ch.posted) return progress;
                    wait_until(s, ch.arrivals[ch.posted++]);
                    break;
                }
                case OpKind::irecv: {
                    const ChannelKey key{e->peer, r, e->tag};
                    s.requests[e->req] = Request{true, key, channels_[key].posted++};
                    break;
                }
                case OpKind::wait: {
                    auto it = s.requests.find(e->req);
                    if (it == s.requests.end()) {
                        throw SimulationError("rank " + std::to_string(r) + " waits on unknown request " +
                                              std::to_string(e->req));
                    }
                    if (it->second.is_recv) {
                        const Channel& ch = channels_[it->second.channel];
                        if (ch.arrivals.size() <= it->second.index) return progress;
                        wait_until(s, ch.arrivals[it->second.index]);
                    }
                    s.requests.erase(it);
                    break;
                }
                case OpKind::coll:
                    return progress;
            }
            ++s.pc;
            progress = true;
        }
        return progress;
    }

    bool release_collectives() {
        std::map<std::string, std::vector<int>> waiting;
        for (int r = 0; r < trace_.ranks; ++r) {
            const TraceEvent* e = current(r);
            if (e && e->op == OpKind::coll) waiting[e->coll_id].push_back(r);
        }
        bool progress = false;
        for (const auto& [id, members] : waiting) {
            if (static_cast<int>(members.size()) != participants_.at(id)) continue;
            double t = 0.0;
            for (int r : members) t = std::max(t, ranks_[static_cast<std::size_t>(r)].clock);
            t += config_.collective_min_delay;
            for (int r : members) {
                ranks_[static_cast<std::size_t>(r)].clock = t;
                ++ranks_[static_cast<std::size_t>(r)].pc;
            }
            progress = true;
        }
        return progress;
    }

    void check_finished() const {
        std::vector<int> stuck;
        std::ostringstream detail;
        for (int r = 0; r < trace_.ranks; ++r) {
            const TraceEvent* e = current(r);
            if (!e) continue;
            if (!stuck.empty()) detail << "; ";
            stuck.push_back(r);
            detail << "rank " << r << " at " << to_string(e->op);
            if (e->op == OpKind::recv) detail << " from " << e->peer << " tag " << e->tag;
            if (e->op == OpKind::wait) detail << " req " << e->req;
            if (e->op == OpKind::coll) detail << " '" << e->coll_id << "'";
        }
        if (!stuck.empty()) {
            throw DeadlockError("deadlock: " + detail.str(), std::move(stuck));
        }
        for (const auto& [key, ch] : channels_) {
            if (ch.arrivals.size() > ch.posted) {
                const auto& [src, dst, tag] = key;
                throw SimulationError("message from rank " + std::to_string(src) + " to rank " +
                                      std::to_string(dst) + " tag " + std::to_string(tag) +
                                      " is never received");
            }
        }
    }

    SimReport finish() {
        report_.ranks = trace_.ranks;
        report_.node_count = topology_.node_count();
        report_.per_rank_finish.reserve(ranks_.size());
        for (const RankState& s : ranks_) {
            report_.per_rank_finish.push_back(s.clock);
            report_.makespan = std::max(report_.makespan, s.clock);
        }
        report_.parallel_cost = report_.makespan * static_cast<double>(report_.node_count);
        for (const auto& [link, bytes] : link_bytes_) {
            if (bytes > 0) report_.per_link_bytes.push_back(LinkBytes{link.first, link.second, bytes});
        }
        for (const auto& [pair, cell] : traffic_) {
            report_.traffic.push_back(PairTraffic{pair.first, pair.second, cell.first, cell.second});
        }
        return std::move(report_);
    }

    const Trace& trace_;
    const Mapping& mapping_;
    const Topology& topology_;
    const LinkModel& model_;
    const ModelConfig& config_;

    std::vector<RankState> ranks_;
    std::map<std::string, int> participants_;
    std::map<ChannelKey, Channel> channels_;
    std::unordered_map<std::int64_t, Route> routes_;
    std::map<std::pair<NodeId, NodeId>, std::uint64_t> link_bytes_;
    std::map<std::pair<int, int>, std::pair<std::uint64_t, std::uint64_t>> traffic_;
    SimReport report_;
};

}  // namespace

SimReport simulate(const Trace& trace, const Mapping& mapping, const Topology& topology,
                   const ModelConfig& config) {
    const PipelinedLinkModel model(config);
    return simulate(trace, mapping, topology, model, config);
}

SimReport simulate(const Trace& trace, const Mapping& mapping, const Topology& topology,
                   const LinkModel& model, const ModelConfig& config) {
    config.validate();
    trace.validate();
    if (mapping.size() != topology.node_count() || mapping.dims() != topology.dims()) {
        throw InputError("mapping does not cover topology " + topology.label());
    }
    if (trace.ranks > mapping.size()) {
        throw InputError("trace has " + std::to_string(trace.ranks) + " ranks but the mapping covers " +
                         std::to_string(mapping.size()));
    }
    return Replay(trace, mapping, topology, model, config).run();
}

MatrixPair post_matrices(const SimReport& report) {
    MatrixPair mp{CommMatrix(report.ranks, MatrixKind::count),
                  CommMatrix(report.ranks, MatrixKind::volume)};
    for (const PairTraffic& t : report.traffic) {
        mp.count.add(t.src, t.dst, static_cast<double>(t.count));
        mp.volume.add(t.src, t.dst, static_cast<double>(t.bytes));
    }
    return mp;
}

std::string report_to_json(const SimReport& r) {
    nlohmann::json j;
    j["ranks"] = r.ranks;
    j["node_count"] = r.node_count;
    j["per_rank_finish"] = r.per_rank_finish;
    j["makespan"] = r.makespan;
    j["parallel_cost"] = r.parallel_cost;
    j["p2p_cost"] = r.p2p_cost;
    j["comm_model_time"] = r.comm_model_time;
    j["msg_count"] = r.msg_count;
    j["total_bytes"] = r.total_bytes;
    j["post_dilation_count"] = r.post_dilation_count;
    j["post_dilation_volume"] = r.post_dilation_volume;
    nlohmann::json links = nlohmann::json::array();
    for (const LinkBytes& l : r.per_link_bytes) links.push_back({l.from, l.to, l.bytes});
    j["per_link_bytes"] = std::move(links);
    nlohmann::json traffic = nlohmann::json::array();
    for (const PairTraffic& t : r.traffic) traffic.push_back({t.src, t.dst, t.count, t.bytes});
    j["traffic"] = std::move(traffic);
    return j.dump(2) + "\n";
}

SimReport parse_report_json(std::string_view text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(text);
        SimReport r;
        r.ranks = j.at("ranks").get<int>();
        r.node_count = j.at("node_count").get<int>();
        r.per_rank_finish = j.at("per_rank_finish").get<std::vector<double>>();
        r.makespan = j.at("makespan").get<double>();
        r.parallel_cost = j.at("parallel_cost").get<double>();
        r.p2p_cost = j.at("p2p_cost").get<double>();
        r.comm_model_time = j.at("comm_model_time").get<double>();
        r.msg_count = j.at("msg_count").get<std::uint64_t>();
        r.total_bytes = j.at("total_bytes").get<std::uint64_t>();
        r.post_dilation_count = j.at("post_dilation_count").get<std::uint64_t>();
        r.post_dilation_volume = j.at("post_dilation_volume").get<std::uint64_t>();
        for (const auto& l : j.at("per_link_bytes")) {
            r.per_link_bytes.push_back(
                LinkBytes{l.at(0).get<NodeId>(), l.at(1).get<NodeId>(), l.at(2).get<std::uint64_t>()});
        }
        for (const auto& t : j.at("traffic")) {
            const PairTraffic cell{t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<std::uint64_t>(),
                                   t.at(3).get<std::uint64_t>()};
            if (cell.src < 0 || cell.src >= r.ranks || cell.dst < 0 || cell.dst >= r.ranks) {
                throw InputError("simulation report traffic entry outside the rank range");
            }
            r.traffic.push_back(cell);
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed simulation report: ") + e.what());
    }
}

std::string report_csv_header() {
    return "ranks,node_count,makespan,parallel_cost,p2p_cost,comm_model_time,msg_count,total_bytes,"
           "post_dilation_count,post_dilation_volume";
}

std::string report_csv_row(const SimReport& r) {
    return std::to_string(r.ranks) + "," + std::to_string(r.node_count) + "," +
           format_double(r.makespan) + "," + format_double(r.parallel_cost) + "," +
           format_double(r.p2p_cost) + "," + format_double(r.comm_model_time) + "," +
           std::to_string(r.msg_count) + "," + std::to_string(r.total_bytes) + "," +
           std::to_string(r.post_dilation_count) + "," + std::to_string(r.post_dilation_volume);
}

}  // namespace mapkit
