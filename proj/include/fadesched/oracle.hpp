/**
 * \file oracle.hpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 *
 * Exact offline optima by exhaustive search. These are ground truth for the
 * test suites, so they trade speed for certainty and refuse inputs above a
 * hard packet cap instead of truncating.
 */

#ifndef FADESCHED_ORACLE_HPP
#define FADESCHED_ORACLE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fadesched/model.hpp"

namespace fadesched {

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultOracleCap = 12;
inline constexpr std::size_t kBoundedDelayCap = 16;

/// Maximum weighted throughput over all schedules. Committed packets are run
/// to completion (an abort only burns channel time), and idling is only
/// explored up to the next release. Ties go to the earliest completion
/// profile, then to the lexicographically smallest delivered id set.
ScheduleOutcome offline_optimal(const Instance& inst, std::size_t cap = kDefaultOracleCap);

/// Unit-slot model: every slot sends at most one packet, which must lie in
/// [release, deadline].
struct BoundedDelayInstance {
    std::vector<Packet> packets;
    Step horizon = 0;

    void check() const;
};

struct BoundedDelaySchedule {
    double value = 0.0;
    std::vector<std::pair<Step, PacketId>> slots;  // ascending slot, EDF order
};

BoundedDelaySchedule bounded_delay_optimal(const BoundedDelayInstance& inst, std::size_t cap = kBoundedDelayCap);

struct PlanEntry {
    PacketId packet_id;
    Step start = 1;
    std::optional<Step> abort_at;  // unset: run to completion
};

struct ReplayedPlan {
    ScheduleOutcome outcome;
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
};

/// Executes an explicit adversary plan. Valid plans whose aborts are each
/// followed by a start are also re-run through the engine and must agree.
ReplayedPlan adversary_replay(const Instance& inst, const std::vector<PlanEntry>& plan);

}  // namespace fadesched

#endif  // FADESCHED_ORACLE_HPP
