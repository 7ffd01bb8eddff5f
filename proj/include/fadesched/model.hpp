/**
 * \file model.hpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 *
 * Discrete-time fading-channel model: packets, fade traces, instances,
 * transmissions and schedule outcomes, plus the outcome validator.
 */

#ifndef FADESCHED_MODEL_HPP
#define FADESCHED_MODEL_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fadesched {

/// 1-based step index.
using Step = int;
using PacketId = std::string;

/// Packet length is normalized to 1; a transmission completes once the
/// cumulative quality reaches 1 - kQualityEpsilon.
inline constexpr double kQualityEpsilon = 1e-9;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Packet {
    PacketId id;
    Step release = 1;
    double weight = 0.0;
    Step deadline = 1;

    bool operator==(const Packet&) const = default;
};

/// Per-step channel quality q_t in [0, 1], indexed 1..horizon.
class FadeTrace {
public:
    FadeTrace() = default;
    explicit FadeTrace(std::vector<double> qualities);

    static FadeTrace constant(double q, Step horizon);

    Step horizon() const { return static_cast<Step>(q_.size()); }
    double quality(Step t) const;
    std::span<const double> qualities() const { return q_; }

    /// Sum of q over [from, to], inclusive; 0 when to < from.
    double cumulative(Step from, Step to) const;

    bool operator==(const FadeTrace&) const = default;

private:
    std::vector<double> q_;
};

struct Instance {
    std::vector<Packet> packets;
    FadeTrace trace;

    /// Throws InputError on broken invariants (ids, releases, deadlines).
    void check() const;
    const Packet* find(const PacketId& id) const;
    std::size_t index_of(const PacketId& id) const;
};

enum class TransmissionStatus { completed, aborted };

struct Transmission {
    PacketId packet_id;
    Step start = 1;
    Step end = 1;  // last occupied step
    TransmissionStatus status = TransmissionStatus::completed;
    Step aborted_at = 0;  // step at whose start the abort took effect

    bool operator==(const Transmission&) const = default;
};

struct ScheduleOutcome {
    std::vector<Transmission> transmissions;
    std::vector<PacketId> delivered;  // sorted
    double throughput = 0.0;

    bool operator==(const ScheduleOutcome&) const = default;
};

/// Minimal t2 >= start with sum_{start..t2} q >= 1, or nullopt if the trace
/// ends first.
std::optional<Step> completion_step(Step start, const FadeTrace& trace);

/// True iff `p` started at `start` completes by the end of step p.deadline.
bool commit_feasible(const Packet& p, Step start, const FadeTrace& trace);

double weighted_throughput(const ScheduleOutcome& out, const Instance& inst);

struct Violation {
    enum class Kind {
        unknown_packet,
        out_of_range,
        overlap,
        before_release,
        late_completion,
        not_minimal,
        insufficient_quality,
        reused_progress,
        abort_inconsistent,
        delivered_twice,
        delivered_mismatch,
        throughput_mismatch,
    };
    Kind kind;
    std::string message;
};

const char* to_string(Violation::Kind kind);

/// Every model constraint the outcome breaks; empty means valid.
std::vector<Violation> validate_outcome(const Instance& inst, const ScheduleOutcome& out);

/// Builds delivered/throughput from the transmission list.
ScheduleOutcome make_outcome(const Instance& inst, std::vector<Transmission> transmissions);

}  // namespace fadesched

#endif  // FADESCHED_MODEL_HPP
