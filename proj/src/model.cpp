/**
 * \file model.cpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 */

#include "fadesched/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace fadesched {

FadeTrace::FadeTrace(std::vector<double> qualities) : q_(std::move(qualities)) {
    for (std::size_t i = 0; i < q_.size(); ++i) {
        const double q = q_[i];
        if (!(q >= 0.0 && q <= 1.0))
            throw InputError("fade quality at step " + std::to_string(i + 1) + " outside [0, 1]");
    }
}

FadeTrace FadeTrace::constant(double q, Step horizon) {
    if (horizon < 0) throw InputError("negative horizon");
    return FadeTrace(std::vector<double>(static_cast<std::size_t>(horizon), q));
}

double FadeTrace::quality(Step t) const {
    if (t < 1 || t > horizon()) throw InputError("step " + std::to_string(t) + " outside trace");
    return q_[static_cast<std::size_t>(t - 1)];
}

double FadeTrace::cumulative(Step from, Step to) const {
    from = std::max(from, 1);
    to = std::min(to, horizon());
    double sum = 0.0;
    for (Step t = from; t <= to; ++t) sum += q_[static_cast<std::size_t>(t - 1)];
    return sum;
}

void Instance::check() const {
    std::set<PacketId> ids;
    for (const auto& p : packets) {
        if (!ids.insert(p.id).second) throw InputError("duplicate packet id '" + p.id + "'");
        if (!(p.weight >= 0.0) || !std::isfinite(p.weight))
            throw InputError("packet '" + p.id + "' has invalid weight");
        if (p.release < 1) throw InputError("packet '" + p.id + "' released before step 1");
        if (p.deadline < p.release) throw InputError("packet '" + p.id + "' has deadline before release");
        if (p.deadline > trace.horizon())
            throw InputError("packet '" + p.id + "' has deadline beyond the horizon");
    }
}

const Packet* Instance::find(const PacketId& id) const {
    auto it = std::find_if(packets.begin(), packets.end(), [&](const Packet& p) { return p.id == id; });
    return it == packets.end() ? nullptr : &*it;
}

std::size_t Instance::index_of(const PacketId& id) const {
    for (std::size_t i = 0; i < packets.size(); ++i)
        if (packets[i].id == id) return i;
    throw InputError("unknown packet id '" + id + "'");
}

std::optional<Step> completion_step(Step start, const FadeTrace& trace) {
    if (start < 1 || start > trace.horizon())
        throw InputError("start step " + std::to_string(start) + " outside [1, horizon]");
    double sum = 0.0;
    for (Step t = start; t <= trace.horizon(); ++t) {
        sum += trace.quality(t);
        if (sum >= 1.0 - kQualityEpsilon) return t;
    }
    return std::nullopt;
}

bool commit_feasible(const Packet& p, Step start, const FadeTrace& trace) {
    if (start < p.release)
        throw InputError("packet '" + p.id + "' cannot start before its release");
    if (start > trace.horizon() || start > p.deadline) return false;
    auto done = completion_step(start, trace);
    return done && *done <= p.deadline;
}

double weighted_throughput(const ScheduleOutcome& out, const Instance& inst) {
    double sum = 0.0;
    for (const auto& id : out.delivered)
        if (const Packet* p = inst.find(id)) sum += p->weight;
    return sum;
}

const char* to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::unknown_packet: return "unknown_packet";
        case Violation::Kind::out_of_range: return "out_of_range";
        case Violation::Kind::overlap: return "overlap";
        case Violation::Kind::before_release: return "before_release";
        case Violation::Kind::late_completion: return "late_completion";
        case Violation::Kind::not_minimal: return "not_minimal";
        case Violation::Kind::insufficient_quality: return "insufficient_quality";
        case Violation::Kind::reused_progress: return "reused_progress";
        case Violation::Kind::abort_inconsistent: return "abort_inconsistent";
        case Violation::Kind::delivered_twice: return "delivered_twice";
        case Violation::Kind::delivered_mismatch: return "delivered_mismatch";
        case Violation::Kind::throughput_mismatch: return "throughput_mismatch";
    }
    return "?";
}

std::vector<Violation> validate_outcome(const Instance& inst, const ScheduleOutcome& out) {
    using K = Violation::Kind;
    std::vector<Violation> found;
    auto report = [&](K kind, std::string msg) { found.push_back({kind, std::move(msg)}); };

    const auto& trace = inst.trace;
    std::vector<std::size_t> order(out.transmissions.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.transmissions[a].start < out.transmissions[b].start;
    });

    std::map<Step, std::size_t> occupied;
    std::set<PacketId> seen, completed;
    std::set<Step> overlap_steps;
    for (std::size_t k : order) {
        const Transmission& tx = out.transmissions[k];
        const std::string tag = "transmission of '" + tx.packet_id + "' at " + std::to_string(tx.start) + "-" +
                                std::to_string(tx.end);
        const Packet* p = inst.find(tx.packet_id);
        if (!p) {
            report(K::unknown_packet, "unknown packet '" + tx.packet_id + "'");
            continue;
        }
        if (tx.start < 1 || tx.end > trace.horizon() || tx.end < tx.start) {
            report(K::out_of_range, tag + " outside [1, horizon] or empty");
            continue;
        }
        for (Step t = tx.start; t <= tx.end; ++t) {
            auto [it, fresh] = occupied.emplace(t, k);
            if (!fresh && overlap_steps.insert(t).second)
                report(K::overlap, "overlap at step " + std::to_string(t));
        }
        if (tx.start < p->release) report(K::before_release, tag + " starts before release " + std::to_string(p->release));
        if (completed.contains(p->id)) report(K::delivered_twice, tag + " follows a completed transmission");

        const double total = trace.cumulative(tx.start, tx.end);
        const bool full = total >= 1.0 - kQualityEpsilon;
        if (tx.status == TransmissionStatus::completed) {
            if (!full) {
                if (seen.contains(p->id))
                    report(K::reused_progress, tag + " relies on progress from an aborted transmission");
                else
                    report(K::insufficient_quality, tag + " accumulates quality " + std::to_string(total) + " < 1");
            } else if (tx.end > tx.start && trace.cumulative(tx.start, tx.end - 1) >= 1.0 - kQualityEpsilon) {
                report(K::not_minimal, tag + " occupies steps after reaching full quality");
            }
            if (tx.end > p->deadline)
                report(K::late_completion, tag + " completes after deadline " + std::to_string(p->deadline));
            completed.insert(p->id);
        } else {
            if (tx.aborted_at != tx.end + 1)
                report(K::abort_inconsistent, tag + " aborted at step " + std::to_string(tx.aborted_at) +
                                                  " but last occupied step is " + std::to_string(tx.end));
            if (full) report(K::abort_inconsistent, tag + " reached full quality before its abort");
        }
        seen.insert(p->id);
    }

    std::vector<PacketId> expect(completed.begin(), completed.end());
    if (expect != out.delivered) report(K::delivered_mismatch, "delivered set differs from completed transmissions");
    std::set<PacketId> unique(out.delivered.begin(), out.delivered.end());
    double sum = 0.0;
    for (const auto& id : unique)
        if (const Packet* p = inst.find(id)) sum += p->weight;
    if (std::abs(sum - out.throughput) > 1e-9 * std::max(1.0, std::abs(sum)))
        report(K::throughput_mismatch, "throughput " + std::to_string(out.throughput) + " != delivered weight " +
                                           std::to_string(sum));
    return found;
}

ScheduleOutcome make_outcome(const Instance& inst, std::vector<Transmission> transmissions) {
    ScheduleOutcome out;
    out.transmissions = std::move(transmissions);
    std::set<PacketId> done;
    for (const auto& tx : out.transmissions)
        if (tx.status == TransmissionStatus::completed) done.insert(tx.packet_id);
    out.delivered.assign(done.begin(), done.end());
    out.throughput = weighted_throughput(out, inst);
    return out;
}

}  // namespace fadesched
