/**
 * \file engine.hpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 *
 * Step-by-step simulation of an online policy under preemption-restart
 * semantics. The engine owns the channel; policies only see what the
 * visibility mode allows through PolicyView.
 */

#ifndef FADESCHED_ENGINE_HPP
#define FADESCHED_ENGINE_HPP

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fadesched/model.hpp"

namespace fadesched {

enum class VisibilityMode { fade_known, fade_unknown_with_commit_oracle };

const char* to_string(VisibilityMode mode);
VisibilityMode parse_mode(const std::string& text);

struct PolicyContractError : std::runtime_error {
    PolicyContractError(Step step, const std::string& what)
        : std::runtime_error("policy contract violated at step " + std::to_string(step) + ": " + what), step(step) {}
    Step step;
};

struct ReplayMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunningPacket {
    Packet packet;
    Step start;
};

/// What a policy may observe at a decision point.
class PolicyView {
public:
    PolicyView(Step now, std::vector<Packet> pending, std::vector<PacketId> arrivals,
               std::optional<RunningPacket> running, const FadeTrace& trace, VisibilityMode mode)
        : now_(now),
          pending_(std::move(pending)),
          arrivals_(std::move(arrivals)),
          running_(std::move(running)),
          trace_(&trace),
          mode_(mode) {}

    Step now() const { return now_; }
    /// Released, undelivered, unexpired and not running.
    const std::vector<Packet>& pending() const { return pending_; }
    /// Ids of pending packets released at `now`.
    const std::vector<PacketId>& arrivals() const { return arrivals_; }
    bool is_arrival(const PacketId& id) const;
    const std::optional<RunningPacket>& running() const { return running_; }

    /// Commit oracle: can `p`, started now, complete by its deadline?
    bool feasible(const Packet& p) const;
    double current_quality() const { return trace_->quality(now_); }

    /// Whole trace under fade_known; nullptr otherwise.
    const FadeTrace* trace() const { return mode_ == VisibilityMode::fade_known ? trace_ : nullptr; }
    VisibilityMode mode() const { return mode_; }

private:
    Step now_;
    std::vector<Packet> pending_;
    std::vector<PacketId> arrivals_;
    std::optional<RunningPacket> running_;
    const FadeTrace* trace_;
    VisibilityMode mode_;
};

struct Decision {
    enum class Kind { idle, continue_running, start, abort_and_start };
    Kind kind = Kind::idle;
    PacketId packet;  // for start / abort_and_start

    static Decision idle() { return {Kind::idle, {}}; }
    static Decision keep() { return {Kind::continue_running, {}}; }
    static Decision start(PacketId id) { return {Kind::start, std::move(id)}; }
    static Decision preempt(PacketId id) { return {Kind::abort_and_start, std::move(id)}; }

    bool operator==(const Decision&) const = default;
};

const char* to_string(Decision::Kind kind);

class OnlinePolicy {
public:
    virtual ~OnlinePolicy() = default;
    virtual Decision decide(const PolicyView& view) const = 0;
    virtual std::string name() const = 0;
    virtual bool needs_fade_knowledge() const { return false; }
};

struct StepRecord {
    Step step = 0;
    std::vector<PacketId> pending;  // as shown to the policy
    std::optional<PacketId> running;
    Decision decision;
    std::vector<PacketId> expired;
    std::optional<PacketId> aborted;
    std::optional<PacketId> committed;
    std::optional<PacketId> completed;

    bool operator==(const StepRecord&) const = default;
};

struct DecisionLog {
    std::vector<StepRecord> records;

    bool operator==(const DecisionLog&) const = default;
};

struct RunResult {
    ScheduleOutcome outcome;
    DecisionLog log;
};

/// Simulates steps 1..horizon. Throws PolicyContractError on an illegal
/// decision and InputError if the policy needs a trace the mode hides.
RunResult run(const Instance& inst, const OnlinePolicy& policy, VisibilityMode mode);

/// Re-derives the outcome from a log; throws ReplayMismatch when the log
/// does not describe a run on `inst`.
ScheduleOutcome replay(const Instance& inst, const DecisionLog& log);

/// Plays back a fixed step -> decision script; idles on unscripted steps.
class ScriptedPolicy final : public OnlinePolicy {
public:
    explicit ScriptedPolicy(std::vector<std::pair<Step, Decision>> script) : script_(std::move(script)) {}
    Decision decide(const PolicyView& view) const override;
    std::string name() const override { return "scripted"; }

private:
    std::vector<std::pair<Step, Decision>> script_;
};

void write_jsonl(std::ostream& os, const DecisionLog& log);
DecisionLog read_jsonl(std::istream& is);

}  // namespace fadesched

#endif  // FADESCHED_ENGINE_HPP
