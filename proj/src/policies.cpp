/**
 * \file policies.cpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 */

#include "fadesched/policies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace fadesched {

namespace {

std::string format_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Heaviest feasible pending packet, or nullptr.
const Packet* heaviest_feasible(const PolicyView& view) {
    const Packet* best = nullptr;
    for (const auto& p : view.pending())
        if (view.feasible(p) && (!best || heavier_first(p, *best))) best = &p;
    return best;
}

const Packet* earliest_feasible(const PolicyView& view) {
    const Packet* best = nullptr;
    for (const auto& p : view.pending())
        if (view.feasible(p) && (!best || earlier_deadline_first(p, *best))) best = &p;
    return best;
}

bool deadline_order_fits(std::vector<const Packet*>& set, const std::vector<Step>& ladder) {
    if (set.size() > ladder.size()) return false;
    std::sort(set.begin(), set.end(), [](const Packet* a, const Packet* b) { return earlier_deadline_first(*a, *b); });
    for (std::size_t j = 0; j < set.size(); ++j)
        if (set[j]->deadline < ladder[j]) return false;
    return true;
}

}  // namespace

bool heavier_first(const Packet& a, const Packet& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.deadline != b.deadline) return a.deadline < b.deadline;
    return a.id < b.id;
}

bool earlier_deadline_first(const Packet& a, const Packet& b) {
    if (a.deadline != b.deadline) return a.deadline < b.deadline;
    return a.id < b.id;
}

std::vector<Step> completion_ladder(Step t, const FadeTrace& trace, std::size_t count) {
    std::vector<Step> ladder;
    Step start = t;
    while (ladder.size() < count && start <= trace.horizon()) {
        auto done = completion_step(start, trace);
        if (!done) break;
        ladder.push_back(*done);
        start = *done + 1;
    }
    return ladder;
}

ProvisionalSchedule optimal_provisional(const std::vector<Packet>& pending, Step t, const FadeTrace& trace) {
    ProvisionalSchedule plan;
    if (pending.empty() || t > trace.horizon()) return plan;
    const std::vector<Step> ladder = completion_ladder(t, trace, pending.size());

    std::vector<const Packet*> by_weight;
    for (const auto& p : pending) by_weight.push_back(&p);
    std::sort(by_weight.begin(), by_weight.end(), [](const Packet* a, const Packet* b) { return heavier_first(*a, *b); });

    std::vector<const Packet*> chosen;
    for (const Packet* p : by_weight) {
        auto trial = chosen;
        trial.push_back(p);
        if (deadline_order_fits(trial, ladder)) chosen = std::move(trial);
    }

    Step start = t;
    for (std::size_t j = 0; j < chosen.size(); ++j) {
        const Packet& p = *chosen[j];
        plan.slots.push_back({p.id, start, ladder[j], p.weight, p.deadline});
        plan.total_value += p.weight;
        start = ladder[j] + 1;
    }
    return plan;
}

SemiGreedy::SemiGreedy(double alpha) : alpha_(alpha) {
    if (!(alpha > 1.0)) throw InputError("semi-greedy needs alpha > 1");
}

std::string SemiGreedy::name() const { return "semi-greedy:alpha=" + format_param(alpha_); }

Decision SemiGreedy::decide(const PolicyView& view) const {
    const Packet* h = heaviest_feasible(view);
    const auto& running = view.running();
    const double w_i = running ? running->packet.weight : 0.0;
    if (h && h->weight >= alpha_ * w_i) return running ? Decision::preempt(h->id) : Decision::start(h->id);
    return running ? Decision::keep() : Decision::idle();
}

EdfBeta::EdfBeta(double beta) : beta_(beta) {
    if (!(beta > 1.0)) throw InputError("edf needs beta > 1");
}

std::string EdfBeta::name() const { return "edf:beta=" + format_param(beta_); }

Decision EdfBeta::decide(const PolicyView& view) const {
    if (const auto& running = view.running()) {
        const Packet* pick = nullptr;
        for (const auto& p : view.pending()) {
            if (!view.is_arrival(p.id) || !view.feasible(p)) continue;
            if (p.weight < beta_ * running->packet.weight) continue;
            if (!pick || p.deadline < pick->deadline || (p.deadline == pick->deadline && heavier_first(p, *pick)))
                pick = &p;
        }
        return pick ? Decision::preempt(pick->id) : Decision::keep();
    }

    const FadeTrace* trace = view.trace();
    if (!trace) throw InputError("edf policy invoked without fade knowledge");
    std::vector<Packet> candidates;
    for (const auto& p : view.pending())
        if (view.feasible(p)) candidates.push_back(p);
    const ProvisionalSchedule plan = optimal_provisional(candidates, view.now(), *trace);
    if (plan.empty()) return Decision::idle();

    const PlannedSlot& e = plan.slots.front();
    const PlannedSlot* h = &e;
    for (const auto& s : plan.slots)
        if (s.weight > h->weight) h = &s;  // slots are deadline-ordered, so ties keep the earlier one
    if (e.weight >= h->weight / beta_) return Decision::start(e.packet_id);

    const double threshold = std::max(beta_ * e.weight, h->weight / beta_);
    for (const auto& s : plan.slots)
        if (s.weight >= threshold) return Decision::start(s.packet_id);
    return Decision::start(h->packet_id);
}

Decision GreedyMax::decide(const PolicyView& view) const {
    const Packet* h = heaviest_feasible(view);
    const auto& running = view.running();
    if (!running) return h ? Decision::start(h->id) : Decision::idle();
    if (h && h->weight > running->packet.weight) return Decision::preempt(h->id);
    return Decision::keep();
}

Decision BaselineEdf::decide(const PolicyView& view) const {
    const Packet* e = earliest_feasible(view);
    const auto& running = view.running();
    if (!running) return e ? Decision::start(e->id) : Decision::idle();
    if (e && e->deadline < running->packet.deadline) return Decision::preempt(e->id);
    return Decision::keep();
}

Decision NonAbortCommit::decide(const PolicyView& view) const {
    if (view.running()) return Decision::keep();
    const Packet* pick = nullptr;
    for (const auto& p : view.pending()) {
        if (!view.feasible(p)) continue;
        if (!pick || p.release < pick->release || (p.release == pick->release && earlier_deadline_first(p, *pick)))
            pick = &p;
    }
    return pick ? Decision::start(pick->id) : Decision::idle();
}

namespace {

double parse_value(const std::string& text) {
    if (text == "phi") return std::numbers::phi;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw InputError("bad policy parameter '" + text + "'");
    }
    if (used != text.size()) throw InputError("bad policy parameter '" + text + "'");
    return v;
}

double named_param(const std::string& params, const std::string& key) {
    const std::string prefix = key + "=";
    if (params.rfind(prefix, 0) != 0) throw InputError("expected '" + prefix + "<value>', got '" + params + "'");
    return parse_value(params.substr(prefix.size()));
}

}  // namespace

std::unique_ptr<OnlinePolicy> make_policy(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string params = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "semi-greedy") return std::make_unique<SemiGreedy>(named_param(params, "alpha"));
    if (head == "edf") return std::make_unique<EdfBeta>(named_param(params, "beta"));
    if (!params.empty()) throw InputError("policy '" + head + "' takes no parameters");
    if (head == "greedy-max") return std::make_unique<GreedyMax>();
    if (head == "baseline-edf") return std::make_unique<BaselineEdf>();
    if (head == "nonabort-commit") return std::make_unique<NonAbortCommit>();
    throw InputError("unknown policy '" + spec + "'");
}

}  // namespace fadesched
