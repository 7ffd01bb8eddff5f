/**
 * \file io.cpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 */

#include "fadesched/io.hpp"

#include <fstream>
#include <sstream>

namespace fadesched {

namespace {

json packets_to_json(const std::vector<Packet>& packets) {
    json arr = json::array();
    for (const auto& p : packets)
        arr.push_back({{"id", p.id}, {"release", p.release}, {"weight", p.weight}, {"deadline", p.deadline}});
    return arr;
}

std::vector<Packet> packets_from_json(const json& arr) {
    std::vector<Packet> packets;
    for (const json& p : arr) {
        Packet pk;
        const json& id = p.at("id");
        pk.id = id.is_string() ? id.get<std::string>() : id.dump();
        pk.release = p.at("release").get<Step>();
        pk.weight = p.at("weight").get<double>();
        pk.deadline = p.at("deadline").get<Step>();
        packets.push_back(std::move(pk));
    }
    return packets;
}

template <typename F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed ") + what + ": " + e.what());
    }
}

}  // namespace

json to_json(const Instance& inst) {
    const auto q = inst.trace.qualities();
    return {{"horizon", inst.trace.horizon()},
            {"qualities", std::vector<double>(q.begin(), q.end())},
            {"packets", packets_to_json(inst.packets)}};
}

Instance instance_from_json(const json& j) {
    return guarded("instance", [&] {
        Instance inst;
        const Step horizon = j.at("horizon").get<Step>();
        auto q = j.at("qualities").get<std::vector<double>>();
        if (static_cast<Step>(q.size()) != horizon) throw InputError("qualities length differs from horizon");
        inst.trace = FadeTrace(std::move(q));
        inst.packets = packets_from_json(j.at("packets"));
        inst.check();
        return inst;
    });
}

json to_json(const BoundedDelayInstance& bd) {
    return {{"model", "bounded-delay"}, {"horizon", bd.horizon}, {"packets", packets_to_json(bd.packets)}};
}

BoundedDelayInstance bounded_delay_from_json(const json& j) {
    return guarded("bounded-delay instance", [&] {
        if (j.value("model", "") != "bounded-delay") throw InputError("expected \"model\": \"bounded-delay\"");
        BoundedDelayInstance bd;
        bd.horizon = j.at("horizon").get<Step>();
        bd.packets = packets_from_json(j.at("packets"));
        bd.check();
        return bd;
    });
}

AnyInstance any_instance_from_json(const json& j) {
    if (j.is_object() && j.contains("model")) return bounded_delay_from_json(j);
    return instance_from_json(j);
}

json to_json(const ScheduleOutcome& out) {
    json txs = json::array();
    for (const auto& tx : out.transmissions) {
        json t = {{"packet_id", tx.packet_id},
                  {"start", tx.start},
                  {"end", tx.end},
                  {"status", tx.status == TransmissionStatus::completed ? "completed" : "aborted"}};
        if (tx.status == TransmissionStatus::aborted) t["aborted_at"] = tx.aborted_at;
        txs.push_back(std::move(t));
    }
    return {{"transmissions", txs}, {"delivered", out.delivered}, {"throughput", out.throughput}};
}

ScheduleOutcome outcome_from_json(const json& j) {
    return guarded("outcome", [&] {
        ScheduleOutcome out;
        for (const json& t : j.at("transmissions")) {
            Transmission tx;
            tx.packet_id = t.at("packet_id").get<std::string>();
            tx.start = t.at("start").get<Step>();
            tx.end = t.at("end").get<Step>();
            const auto status = t.at("status").get<std::string>();
            if (status == "completed") {
                tx.status = TransmissionStatus::completed;
            } else if (status == "aborted") {
                tx.status = TransmissionStatus::aborted;
                tx.aborted_at = t.value("aborted_at", tx.end + 1);
            } else {
                throw InputError("unknown transmission status '" + status + "'");
            }
            out.transmissions.push_back(std::move(tx));
        }
        out.delivered = j.at("delivered").get<std::vector<PacketId>>();
        out.throughput = j.at("throughput").get<double>();
        return out;
    });
}

json to_json(const std::vector<Expectation>& expected) {
    json arr = json::array();
    for (const auto& e : expected)
        arr.push_back({{"instance", e.instance},
                       {"quantity", e.quantity},
                       {"value", e.value},
                       {"provenance", e.provenance},
                       {"note", e.note}});
    return arr;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
}

}  // namespace fadesched
