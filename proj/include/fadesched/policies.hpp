/**
 * \file policies.hpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 *
 * Online scheduling policies. All of them are stateless: a decision is a
 * pure function of the PolicyView.
 */

#ifndef FADESCHED_POLICIES_HPP
#define FADESCHED_POLICIES_HPP

#include <memory>
#include <string>
#include <vector>

#include "fadesched/engine.hpp"

namespace fadesched {

struct PlannedSlot {
    PacketId packet_id;
    Step start;
    Step completion;
    double weight;
    Step deadline;
};

/// Back-to-back plan for the currently pending packets assuming no further
/// arrivals. Slots are in deadline order (ties by id).
struct ProvisionalSchedule {
    std::vector<PlannedSlot> slots;
    double total_value = 0.0;

    bool empty() const { return slots.empty(); }
};

/// c_1 < c_2 < ... where c_1 = completion_step(t) and each following packet
/// starts right after the previous one completes. Stops early at the end of
/// the trace.
std::vector<Step> completion_ladder(Step t, const FadeTrace& trace, std::size_t count);

/// Maximum-value subset of `pending` that fits the ladder from `t`, found by
/// admitting packets in order of decreasing weight while the deadline-sorted
/// set stays position-feasible.
ProvisionalSchedule optimal_provisional(const std::vector<Packet>& pending, Step t, const FadeTrace& trace);

/// Weight desc, then deadline asc, then id asc.
bool heavier_first(const Packet& a, const Packet& b);
/// Deadline asc, then id asc.
bool earlier_deadline_first(const Packet& a, const Packet& b);

class SemiGreedy final : public OnlinePolicy {
public:
    explicit SemiGreedy(double alpha);
    Decision decide(const PolicyView& view) const override;
    std::string name() const override;
    double alpha() const { return alpha_; }

private:
    double alpha_;
};

class EdfBeta final : public OnlinePolicy {
public:
    explicit EdfBeta(double beta);
    Decision decide(const PolicyView& view) const override;
    std::string name() const override;
    bool needs_fade_knowledge() const override { return true; }
    double beta() const { return beta_; }

private:
    double beta_;
};

/// Runs the heaviest feasible packet; preempts for a strictly heavier one.
class GreedyMax final : public OnlinePolicy {
public:
    Decision decide(const PolicyView& view) const override;
    std::string name() const override { return "greedy-max"; }
};

/// Runs the earliest-deadline feasible packet; preempts for a strictly earlier
/// deadline.
class BaselineEdf final : public OnlinePolicy {
public:
    Decision decide(const PolicyView& view) const override;
    std::string name() const override { return "baseline-edf"; }
};

/// Starts the earliest-released feasible packet and never aborts.
class NonAbortCommit final : public OnlinePolicy {
public:
    Decision decide(const PolicyView& view) const override;
    std::string name() const override { return "nonabort-commit"; }
};

/// Parses "semi-greedy:alpha=1.618", "edf:beta=2", "greedy-max",
/// "baseline-edf", "nonabort-commit". `phi` is accepted as a value.
std::unique_ptr<OnlinePolicy> make_policy(const std::string& spec);

}  // namespace fadesched

#endif  // FADESCHED_POLICIES_HPP
