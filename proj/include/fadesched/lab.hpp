/**
 * \file lab.hpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 *
 * Instance generators (hand-built lower-bound families, random suites, the
 * bounded-delay reduction) and the packet-chain machinery used to audit
 * SEMI-GREEDY runs.
 */

#ifndef FADESCHED_LAB_HPP
#define FADESCHED_LAB_HPP

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "fadesched/engine.hpp"
#include "fadesched/oracle.hpp"

namespace fadesched {

inline constexpr double kPhi = std::numbers::phi;

// ---------------------------------------------------------------- chains

/// Packets p_1..p_k where each weight is at most the next one divided by alpha.
struct Chain {
    std::vector<Packet> packets;
    double alpha = 2.0;

    double total_weight() const;
    double last_weight() const { return packets.back().weight; }
    /// W(C) / w_{p_k}; 1 for an all-zero chain.
    double ratio() const;
    bool has_chain_property() const;
};

/// Supremum of W(C)/w_{p_k} over k-packet chains:
/// (alpha^k - 1) / ((alpha - 1) * alpha^(k-1)), attained by the geometric
/// chain. Tends to alpha / (alpha - 1).
double chain_bound(std::size_t k, double alpha);

/// Splits the started packets of a SEMI-GREEDY log into abort chains. A
/// packet that was restarted is kept in the chain of its last transmission.
/// Throws InputError when an abort link breaks the chain property.
std::vector<Chain> extract_chains(const DecisionLog& log, const Instance& inst, double alpha);

// ---------------------------------------------------------------- instances

struct NamedInstance {
    std::string name;
    Instance instance;
};

/// A value asserted about a generated instance, with where it comes from.
struct Expectation {
    std::string instance;
    std::string quantity;  // e.g. "offline_optimal"
    double value = 0.0;
    std::string provenance;  // "published" (stated with the instance) or "oracle" (computed)
    std::string note;
};

struct InstanceFamily {
    std::vector<NamedInstance> instances;
    std::vector<Expectation> expected;
};

/// Equal weights, q = 0.5 throughout. Branch A: p1(r1,d5), p2(r2,d3).
/// Branch B adds p3(r2,d4).
InstanceFamily gen_ratio2_family();

/// p1(w=1,d=2) and p2(w=phi,d=3), both released at step 1. Branch 1 has
/// q = 0.5 on steps 1..4, branch 2 on steps 1..5; zero afterwards.
InstanceFamily gen_phi_instance();

// ---------------------------------------------------------------- reduction

struct ReducedInstance {
    Instance instance;
    std::vector<PacketId> scheduled;  // p_1..p_m in slot order, dummies included
    std::vector<Step> segment_end;    // rewritten deadline of each p_i
};

/// Fading-channel instance whose offline optimum equals the bounded-delay
/// optimum: the optimal slots become fade segments of total quality 1 that
/// end at strictly increasing deadlines.
ReducedInstance reduce_bounded_delay(const BoundedDelayInstance& bd);

// ---------------------------------------------------------------- random

struct WeightDist {
    enum class Kind { uniform, pareto } kind = Kind::uniform;
    double lo = 1.0;
    double hi = 10.0;
    double shape = 1.5;  // pareto tail index; samples are clipped to hi
};

struct FadeProcess {
    enum class Kind { constant, iid, markov } kind = Kind::constant;
    double q = 1.0;                                  // constant
    std::vector<double> values, probabilities;       // iid
    double q_good = 1.0, q_bad = 0.25;               // two-state Markov
    double p_good_to_bad = 0.2, p_bad_to_good = 0.4;

    /// Long-run mean quality.
    double mean() const;
};

struct RandomSuiteParams {
    std::size_t count = 100;
    std::size_t packets_per_instance = 8;
    bool vary_packet_count = false;  // draw the count uniformly in [1, packets_per_instance]
    Step horizon = 24;
    Step release_span = 12;  // releases uniform in [1, release_span]
    Step slack_max = 4;      // deadline = release + ceil(1 / mean q) + U[0, slack_max]
    WeightDist weights;
    FadeProcess fade;
    std::uint64_t seed = 1;
    std::string name_prefix = "rand";

    void check() const;
};

std::vector<NamedInstance> gen_random(const RandomSuiteParams& params);

struct BoundedDelaySuiteParams {
    std::size_t count = 100;
    std::size_t max_packets = 8;
    Step horizon = 8;
    double weight_lo = 1.0, weight_hi = 10.0;
    std::uint64_t seed = 1;
};

std::vector<BoundedDelayInstance> gen_random_bounded_delay(const BoundedDelaySuiteParams& params);

}  // namespace fadesched

#endif  // FADESCHED_LAB_HPP
