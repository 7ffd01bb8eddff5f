/**
 * \file oracle.cpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 */

#include "fadesched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <unordered_map>

#include "fadesched/engine.hpp"

namespace fadesched {

namespace {

struct Plan {
    double value = 0.0;
    std::vector<std::pair<std::size_t, Step>> commits;  // (packet index, start)
    std::vector<Step> completions;
    std::vector<PacketId> ids;  // sorted
};

bool same_value(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

bool better(const Plan& a, const Plan& b) {
    if (!same_value(a.value, b.value)) return a.value > b.value;
    if (a.completions != b.completions) return a.completions < b.completions;
    return a.ids < b.ids;
}

class OfflineSearch {
public:
    explicit OfflineSearch(const Instance& inst) : inst_(inst), horizon_(inst.trace.horizon()) {
        done_.resize(static_cast<std::size_t>(horizon_) + 2);
        for (Step t = 1; t <= horizon_; ++t) done_[static_cast<std::size_t>(t)] = completion_step(t, inst.trace);
    }

    const Plan& best(Step t, std::uint32_t used) {
        const std::uint64_t key = (static_cast<std::uint64_t>(t) << 32) | used;
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        Plan top;
        if (t <= horizon_) {
            const auto& packets = inst_.packets;
            Step next_release = horizon_ + 1;
            for (std::size_t i = 0; i < packets.size(); ++i) {
                if (used & (1u << i)) continue;
                const Packet& p = packets[i];
                if (p.release > t) {
                    next_release = std::min(next_release, p.release);
                    continue;
                }
                const auto& finish = done_[static_cast<std::size_t>(t)];
                if (!finish || *finish > p.deadline) continue;
                Plan cand = best(*finish + 1, used | (1u << i));
                cand.value += p.weight;
                cand.commits.insert(cand.commits.begin(), {i, t});
                cand.completions.insert(cand.completions.begin(), *finish);
                cand.ids.insert(std::lower_bound(cand.ids.begin(), cand.ids.end(), p.id), p.id);
                if (better(cand, top)) top = std::move(cand);
            }
            if (next_release <= horizon_) {
                const Plan& wait = best(next_release, used);
                if (better(wait, top)) top = wait;
            }
        }
        return memo_.emplace(key, std::move(top)).first->second;
    }

private:
    const Instance& inst_;
    Step horizon_;
    std::vector<std::optional<Step>> done_;
    std::unordered_map<std::uint64_t, Plan> memo_;
};

}  // namespace

ScheduleOutcome offline_optimal(const Instance& inst, std::size_t cap) {
    inst.check();
    if (inst.packets.size() > cap || inst.packets.size() > 31)
        throw ResourceError("offline oracle cap exceeded: " + std::to_string(inst.packets.size()) + " packets > " +
                            std::to_string(std::min<std::size_t>(cap, 31)));
    if (inst.trace.horizon() == 0) return {};
    OfflineSearch search(inst);
    const Plan& plan = search.best(1, 0);
    std::vector<Transmission> txs;
    for (std::size_t j = 0; j < plan.commits.size(); ++j) {
        const auto [i, start] = plan.commits[j];
        txs.push_back({inst.packets[i].id, start, plan.completions[j], TransmissionStatus::completed, 0});
    }
    return make_outcome(inst, std::move(txs));
}

void BoundedDelayInstance::check() const {
    std::set<PacketId> ids;
    for (const auto& p : packets) {
        if (!ids.insert(p.id).second) throw InputError("duplicate packet id '" + p.id + "'");
        if (!(p.weight >= 0.0) || !std::isfinite(p.weight)) throw InputError("packet '" + p.id + "' has invalid weight");
        if (p.release < 1 || p.deadline < p.release || p.deadline > horizon)
            throw InputError("packet '" + p.id + "' needs 1 <= release <= deadline <= horizon");
    }
}

BoundedDelaySchedule bounded_delay_optimal(const BoundedDelayInstance& inst, std::size_t cap) {
    inst.check();
    const auto& packets = inst.packets;
    if (packets.size() > cap || packets.size() > 31)
        throw ResourceError("bounded-delay oracle cap exceeded: " + std::to_string(packets.size()) + " packets");

    std::unordered_map<std::uint64_t, double> memo;
    std::function<double(Step, std::uint32_t)> value = [&](Step s, std::uint32_t used) -> double {
        if (s > inst.horizon) return 0.0;
        const std::uint64_t key = (static_cast<std::uint64_t>(s) << 32) | used;
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        double top = value(s + 1, used);
        for (std::size_t i = 0; i < packets.size(); ++i) {
            if ((used & (1u << i)) || packets[i].release > s || packets[i].deadline < s) continue;
            top = std::max(top, packets[i].weight + value(s + 1, used | (1u << i)));
        }
        memo.emplace(key, top);
        return top;
    };

    BoundedDelaySchedule out;
    out.value = value(1, 0);

    // Recover one optimal set; prefer leaving a slot empty, then lower index.
    std::vector<std::size_t> chosen;
    std::uint32_t used = 0;
    for (Step s = 1; s <= inst.horizon; ++s) {
        const double here = value(s, used);
        if (same_value(value(s + 1, used), here)) continue;
        for (std::size_t i = 0; i < packets.size(); ++i) {
            if ((used & (1u << i)) || packets[i].release > s || packets[i].deadline < s) continue;
            if (same_value(packets[i].weight + value(s + 1, used | (1u << i)), here)) {
                used |= 1u << i;
                chosen.push_back(i);
                break;
            }
        }
    }

    // Re-sequence the set earliest-deadline-first; EDF is exact for unit jobs.
    std::vector<bool> placed(packets.size(), false);
    std::size_t left = chosen.size();
    for (Step s = 1; s <= inst.horizon && left > 0; ++s) {
        const Packet* pick = nullptr;
        std::size_t pick_index = 0;
        for (std::size_t i : chosen) {
            const Packet& p = packets[i];
            if (placed[i] || p.release > s) continue;
            if (!pick || p.deadline < pick->deadline || (p.deadline == pick->deadline && p.id < pick->id)) {
                pick = &p;
                pick_index = i;
            }
        }
        if (!pick) continue;
        if (pick->deadline < s) throw std::logic_error("EDF re-sequencing missed a deadline");
        placed[pick_index] = true;
        --left;
        out.slots.emplace_back(s, pick->id);
    }

    // Same summation order as weighted_throughput (ascending id).
    std::vector<const Packet*> by_id;
    for (std::size_t i : chosen) by_id.push_back(&packets[i]);
    std::sort(by_id.begin(), by_id.end(), [](const Packet* a, const Packet* b) { return a->id < b->id; });
    out.value = 0.0;
    for (const Packet* p : by_id) out.value += p->weight;
    return out;
}

ReplayedPlan adversary_replay(const Instance& inst, const std::vector<PlanEntry>& plan) {
    inst.check();
    std::vector<Transmission> txs;
    for (const auto& entry : plan) {
        if (!inst.find(entry.packet_id)) throw InputError("plan names unknown packet '" + entry.packet_id + "'");
        if (entry.abort_at) {
            txs.push_back({entry.packet_id, entry.start, *entry.abort_at - 1, TransmissionStatus::aborted, *entry.abort_at});
            continue;
        }
        std::optional<Step> end;
        if (entry.start >= 1 && entry.start <= inst.trace.horizon()) end = completion_step(entry.start, inst.trace);
        txs.push_back({entry.packet_id, entry.start, end.value_or(inst.trace.horizon()), TransmissionStatus::completed, 0});
    }

    ReplayedPlan result;
    result.outcome = make_outcome(inst, std::move(txs));
    result.violations = validate_outcome(inst, result.outcome);
    if (!result.ok()) return result;

    std::vector<PlanEntry> sorted = plan;
    std::sort(sorted.begin(), sorted.end(), [](const PlanEntry& a, const PlanEntry& b) { return a.start < b.start; });
    std::vector<std::pair<Step, Decision>> script;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        const bool preempts = j > 0 && sorted[j - 1].abort_at == sorted[j].start;
        script.emplace_back(sorted[j].start,
                            preempts ? Decision::preempt(sorted[j].packet_id) : Decision::start(sorted[j].packet_id));
        if (sorted[j].abort_at && (j + 1 == sorted.size() || sorted[j + 1].start != *sorted[j].abort_at))
            return result;  // abort-to-idle has no engine decision
    }
    const RunResult engine = run(inst, ScriptedPolicy(std::move(script)), VisibilityMode::fade_known);
    auto sort_txs = [](std::vector<Transmission> v) {
        std::sort(v.begin(), v.end(), [](const Transmission& a, const Transmission& b) { return a.start < b.start; });
        return v;
    };
    if (sort_txs(engine.outcome.transmissions) != sort_txs(result.outcome.transmissions))
        throw std::logic_error("engine replay of adversary plan disagrees with the plan");
    return result;
}

}  // namespace fadesched
