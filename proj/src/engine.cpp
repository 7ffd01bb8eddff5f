/**
 * \file engine.cpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 */

#include "fadesched/engine.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace fadesched {

const char* to_string(VisibilityMode mode) {
    return mode == VisibilityMode::fade_known ? "fade-known" : "fade-unknown";
}

VisibilityMode parse_mode(const std::string& text) {
    if (text == "fade-known" || text == "fade_known" || text == "known") return VisibilityMode::fade_known;
    if (text == "fade-unknown" || text == "fade_unknown" || text == "unknown" ||
        text == "fade_unknown_with_commit_oracle")
        return VisibilityMode::fade_unknown_with_commit_oracle;
    throw InputError("unknown visibility mode '" + text + "'");
}

const char* to_string(Decision::Kind kind) {
    switch (kind) {
        case Decision::Kind::idle: return "idle";
        case Decision::Kind::continue_running: return "continue";
        case Decision::Kind::start: return "start";
        case Decision::Kind::abort_and_start: return "abort_and_start";
    }
    return "?";
}

bool PolicyView::is_arrival(const PacketId& id) const {
    return std::find(arrivals_.begin(), arrivals_.end(), id) != arrivals_.end();
}

bool PolicyView::feasible(const Packet& p) const {
    return p.release <= now_ && commit_feasible(p, now_, *trace_);
}

namespace {

enum class PacketState { unreleased, pending, running, delivered, expired };

}  // namespace

RunResult run(const Instance& inst, const OnlinePolicy& policy, VisibilityMode mode) {
    inst.check();
    if (policy.needs_fade_knowledge() && mode != VisibilityMode::fade_known)
        throw InputError("policy '" + policy.name() + "' requires fade-known mode");

    const auto& packets = inst.packets;
    const auto& trace = inst.trace;
    std::vector<PacketState> state(packets.size(), PacketState::unreleased);
    std::optional<std::size_t> running;
    Step running_start = 0;
    double progress = 0.0;

    RunResult result;
    std::vector<Transmission> transmissions;

    auto pending_index = [&](Step now, const PacketId& id) -> std::size_t {
        for (std::size_t i = 0; i < packets.size(); ++i)
            if (packets[i].id == id) {
                if (state[i] != PacketState::pending)
                    throw PolicyContractError(now, "packet '" + id + "' is not pending");
                if (!commit_feasible(packets[i], now, trace))
                    throw PolicyContractError(now, "packet '" + id + "' fails the commit oracle");
                return i;
            }
        throw PolicyContractError(now, "unknown packet '" + id + "'");
    };

    for (Step now = 1; now <= trace.horizon(); ++now) {
        StepRecord rec;
        rec.step = now;

        std::vector<PacketId> arrivals;
        for (std::size_t i = 0; i < packets.size(); ++i)
            if (state[i] == PacketState::unreleased && packets[i].release == now) {
                state[i] = PacketState::pending;
                arrivals.push_back(packets[i].id);
            }

        for (std::size_t i = 0; i < packets.size(); ++i)
            if (state[i] == PacketState::pending && !commit_feasible(packets[i], now, trace)) {
                state[i] = PacketState::expired;
                rec.expired.push_back(packets[i].id);
            }
        std::sort(rec.expired.begin(), rec.expired.end());

        std::vector<Packet> pending;
        for (std::size_t i = 0; i < packets.size(); ++i)
            if (state[i] == PacketState::pending) {
                pending.push_back(packets[i]);
                rec.pending.push_back(packets[i].id);
            }
        std::erase_if(arrivals, [&](const PacketId& id) {
            return state[inst.index_of(id)] != PacketState::pending;
        });

        std::optional<RunningPacket> shown;
        if (running) {
            shown = RunningPacket{packets[*running], running_start};
            rec.running = packets[*running].id;
        }

        const PolicyView view(now, std::move(pending), std::move(arrivals), shown, trace, mode);
        rec.decision = policy.decide(view);
        const Decision& d = rec.decision;

        switch (d.kind) {
            case Decision::Kind::idle:
                if (running) throw PolicyContractError(now, "idle while a packet is running");
                break;
            case Decision::Kind::continue_running:
                if (!running) throw PolicyContractError(now, "continue with nothing running");
                break;
            case Decision::Kind::start: {
                if (running) throw PolicyContractError(now, "start while a packet is running");
                const std::size_t next = pending_index(now, d.packet);
                state[next] = PacketState::running;
                running = next;
                running_start = now;
                progress = 0.0;
                rec.committed = d.packet;
                break;
            }
            case Decision::Kind::abort_and_start: {
                if (!running) throw PolicyContractError(now, "abort with nothing running");
                const std::size_t next = pending_index(now, d.packet);
                transmissions.push_back({packets[*running].id, running_start, now - 1,
                                         TransmissionStatus::aborted, now});
                rec.aborted = packets[*running].id;
                state[*running] = PacketState::pending;
                state[next] = PacketState::running;
                running = next;
                running_start = now;
                progress = 0.0;
                rec.committed = d.packet;
                break;
            }
        }

        if (running) {
            progress += trace.quality(now);
            if (progress >= 1.0 - kQualityEpsilon) {
                transmissions.push_back({packets[*running].id, running_start, now, TransmissionStatus::completed, 0});
                state[*running] = PacketState::delivered;
                rec.completed = packets[*running].id;
                running.reset();
            }
        }
        result.log.records.push_back(std::move(rec));
    }

    result.outcome = make_outcome(inst, std::move(transmissions));
    return result;
}

Decision ScriptedPolicy::decide(const PolicyView& view) const {
    for (const auto& [step, decision] : script_)
        if (step == view.now()) return decision;
    return view.running() ? Decision::keep() : Decision::idle();
}

ScheduleOutcome replay(const Instance& inst, const DecisionLog& log) {
    if (static_cast<Step>(log.records.size()) != inst.trace.horizon())
        throw ReplayMismatch("log has " + std::to_string(log.records.size()) + " records for horizon " +
                             std::to_string(inst.trace.horizon()));
    std::vector<std::pair<Step, Decision>> script;
    for (const auto& rec : log.records) script.emplace_back(rec.step, rec.decision);
    RunResult again;
    try {
        again = run(inst, ScriptedPolicy(std::move(script)), VisibilityMode::fade_known);
    } catch (const PolicyContractError& e) {
        throw ReplayMismatch(e.what());
    }
    for (std::size_t i = 0; i < log.records.size(); ++i)
        if (!(again.log.records[i] == log.records[i]))
            throw ReplayMismatch("log diverges from replay at step " + std::to_string(log.records[i].step));
    return again.outcome;
}

namespace {

using nlohmann::json;

json optional_id(const std::optional<PacketId>& id) { return id ? json(*id) : json(nullptr); }

std::optional<PacketId> read_optional_id(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<std::string>();
}

Decision::Kind parse_kind(const std::string& text) {
    for (auto k : {Decision::Kind::idle, Decision::Kind::continue_running, Decision::Kind::start,
                   Decision::Kind::abort_and_start})
        if (text == to_string(k)) return k;
    throw InputError("unknown decision kind '" + text + "'");
}

}  // namespace

void write_jsonl(std::ostream& os, const DecisionLog& log) {
    for (const auto& rec : log.records) {
        json events = json::array();
        if (!rec.expired.empty()) events.push_back({{"type", "expired"}, {"ids", rec.expired}});
        if (rec.aborted) events.push_back({{"type", "aborted"}, {"packet", *rec.aborted}});
        if (rec.committed) events.push_back({{"type", "committed"}, {"packet", *rec.committed}});
        if (rec.completed) events.push_back({{"type", "completed"}, {"packet", *rec.completed}});
        json decision = {{"kind", to_string(rec.decision.kind)}};
        if (!rec.decision.packet.empty()) decision["packet"] = rec.decision.packet;
        json line = {{"step", rec.step},
                     {"pending", rec.pending},
                     {"running", optional_id(rec.running)},
                     {"decision", decision},
                     {"events", events}};
        os << line.dump() << '\n';
    }
}

DecisionLog read_jsonl(std::istream& is) {
    DecisionLog log;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        StepRecord rec;
        rec.step = j.at("step").get<Step>();
        rec.pending = j.at("pending").get<std::vector<PacketId>>();
        rec.running = read_optional_id(j, "running");
        const json& d = j.at("decision");
        rec.decision.kind = parse_kind(d.at("kind").get<std::string>());
        if (d.contains("packet")) rec.decision.packet = d.at("packet").get<std::string>();
        for (const json& ev : j.at("events")) {
            const auto type = ev.at("type").get<std::string>();
            if (type == "expired")
                rec.expired = ev.at("ids").get<std::vector<PacketId>>();
            else if (type == "aborted")
                rec.aborted = ev.at("packet").get<std::string>();
            else if (type == "committed")
                rec.committed = ev.at("packet").get<std::string>();
            else if (type == "completed")
                rec.completed = ev.at("packet").get<std::string>();
            else
                throw InputError("unknown log event '" + type + "'");
        }
        log.records.push_back(std::move(rec));
    }
    return log;
}

}  // namespace fadesched
