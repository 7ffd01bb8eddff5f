/**
 * \file lab.cpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 */

#include "fadesched/lab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace fadesched {

// ---------------------------------------------------------------- chains

double Chain::total_weight() const {
    double sum = 0.0;
    for (const auto& p : packets) sum += p.weight;
    return sum;
}

double Chain::ratio() const {
    const double total = total_weight();
    if (total == 0.0) return 1.0;
    return total / last_weight();
}

namespace {

bool chain_link_ok(double lower, double upper, double alpha) {
    return lower * alpha <= upper * (1.0 + 1e-12);
}

}  // namespace

bool Chain::has_chain_property() const {
    for (std::size_t i = 0; i + 1 < packets.size(); ++i)
        if (!chain_link_ok(packets[i].weight, packets[i + 1].weight, alpha)) return false;
    return !packets.empty();
}

double chain_bound(std::size_t k, double alpha) {
    if (!(alpha > 1.0)) throw InputError("chain bound needs alpha > 1");
    if (k == 0) throw InputError("chain bound needs k >= 1");
    const double kd = static_cast<double>(k);
    return (std::pow(alpha, kd) - 1.0) / ((alpha - 1.0) * std::pow(alpha, kd - 1.0));
}

std::vector<Chain> extract_chains(const DecisionLog& log, const Instance& inst, double alpha) {
    if (!(alpha > 1.0)) throw InputError("chain extraction needs alpha > 1");

    // One node per transmission; `next` links an aborted transmission to its preemptor.
    struct Node {
        std::size_t packet;
        std::optional<std::size_t> next;
        bool has_prev = false;
    };
    std::vector<Node> nodes;
    std::optional<std::size_t> current;
    for (const auto& rec : log.records) {
        if (!rec.committed) {
            if (rec.completed) current.reset();
            continue;
        }
        const std::size_t node = nodes.size();
        nodes.push_back({inst.index_of(*rec.committed), std::nullopt, false});
        if (rec.aborted) {
            if (!current || inst.packets[nodes[*current].packet].id != *rec.aborted)
                throw InputError("log aborts '" + *rec.aborted + "' which is not running at step " +
                                 std::to_string(rec.step));
            nodes[*current].next = node;
            nodes[node].has_prev = true;
        }
        current = node;
        if (rec.completed) current.reset();
    }

    std::vector<std::size_t> last_node(inst.packets.size(), SIZE_MAX);
    for (std::size_t n = 0; n < nodes.size(); ++n) last_node[nodes[n].packet] = n;

    std::vector<Chain> chains;
    for (std::size_t head = 0; head < nodes.size(); ++head) {
        if (nodes[head].has_prev) continue;
        Chain chain;
        chain.alpha = alpha;
        for (std::optional<std::size_t> n = head; n; n = nodes[*n].next) {
            const Packet& p = inst.packets[nodes[*n].packet];
            if (nodes[*n].next) {
                const Packet& q = inst.packets[nodes[*nodes[*n].next].packet];
                if (!chain_link_ok(p.weight, q.weight, alpha))
                    throw InputError("abort of '" + p.id + "' by '" + q.id + "' breaks the chain property");
            }
            if (last_node[nodes[*n].packet] == *n) chain.packets.push_back(p);
        }
        if (!chain.packets.empty()) chains.push_back(std::move(chain));
    }
    return chains;
}

// ---------------------------------------------------------------- instances

namespace {

Packet make_packet(std::string id, Step release, double weight, Step deadline) {
    return Packet{std::move(id), release, weight, deadline};
}

FadeTrace half_then_zero(Step half_steps, Step horizon) {
    std::vector<double> q(static_cast<std::size_t>(horizon), 0.0);
    std::fill_n(q.begin(), std::min(half_steps, horizon), 0.5);
    return FadeTrace(std::move(q));
}

}  // namespace

InstanceFamily gen_ratio2_family() {
    InstanceFamily fam;
    const FadeTrace trace = FadeTrace::constant(0.5, 6);
    Instance a{{make_packet("p1", 1, 1.0, 5), make_packet("p2", 2, 1.0, 3)}, trace};
    Instance b{{make_packet("p1", 1, 1.0, 5), make_packet("p2", 2, 1.0, 3), make_packet("p3", 2, 1.0, 4)}, trace};
    fam.instances = {{"ratio2-a", a}, {"ratio2-b", b}};
    fam.expected = {
        {"ratio2-a", "offline_optimal", 2.0, "published", "adversary sends p2 then p1"},
        {"ratio2-a", "online:nonabort-commit", 1.0, "published", "committing p1 leaves no room for p2"},
        {"ratio2-b", "offline_optimal", 2.0, "published", "adversary sends p1 at 1-2 then p3 at 3-4"},
    };
    return fam;
}

InstanceFamily gen_phi_instance() {
    InstanceFamily fam;
    const std::vector<Packet> packets = {make_packet("p1", 1, 1.0, 2), make_packet("p2", 1, kPhi, 3)};
    fam.instances = {{"phi-1", Instance{packets, half_then_zero(4, 6)}},
                     {"phi-2", Instance{packets, half_then_zero(5, 6)}}};
    fam.expected = {
        {"phi-1", "offline_optimal", kPhi, "published", "adversary sends p2 alone"},
        {"phi-1", "online:nonabort-commit", 1.0, "published", "online commits p1 first"},
        {"phi-2", "offline_optimal", kPhi, "oracle",
         "exhaustive oracle under complete-by-deadline semantics; the narrated value 1+phi needs p2 to finish at "
         "step 4 > deadline 3"},
    };
    return fam;
}

// ---------------------------------------------------------------- reduction

ReducedInstance reduce_bounded_delay(const BoundedDelayInstance& bd) {
    bd.check();
    const BoundedDelaySchedule opt = bounded_delay_optimal(bd);

    std::set<PacketId> taken;
    for (const auto& p : bd.packets) taken.insert(p.id);

    const Step m = opt.slots.empty() ? 0 : opt.slots.back().first;
    std::vector<Packet> order(static_cast<std::size_t>(m));
    std::vector<bool> filled(static_cast<std::size_t>(m), false);
    std::map<PacketId, const Packet*> by_id;
    for (const auto& p : bd.packets) by_id[p.id] = &p;
    for (const auto& [slot, id] : opt.slots) {
        order[static_cast<std::size_t>(slot - 1)] = *by_id.at(id);
        filled[static_cast<std::size_t>(slot - 1)] = true;
    }
    for (Step i = 1; i <= m; ++i) {
        if (filled[static_cast<std::size_t>(i - 1)]) continue;
        std::string id = "dummy" + std::to_string(i);
        while (taken.contains(id)) id += "_";
        taken.insert(id);
        order[static_cast<std::size_t>(i - 1)] = make_packet(id, i, 0.0, i);
    }

    // Largest deadlines <= the originals that strictly increase along the slots.
    ReducedInstance out;
    out.segment_end.resize(static_cast<std::size_t>(m));
    for (Step i = m; i >= 1; --i) {
        const auto k = static_cast<std::size_t>(i - 1);
        Step d = order[k].deadline;
        if (i < m) d = std::min(d, out.segment_end[k + 1] - 1);
        out.segment_end[k] = d;
        order[k].deadline = d;
    }

    std::vector<double> q(static_cast<std::size_t>(bd.horizon), 0.0);
    Step prev = 0;
    for (Step end : out.segment_end) {
        const double share = 1.0 / static_cast<double>(end - prev);
        for (Step t = prev + 1; t <= end; ++t) q[static_cast<std::size_t>(t - 1)] = share;
        prev = end;
    }
    out.instance.trace = FadeTrace(std::move(q));

    std::set<PacketId> scheduled;
    for (const auto& p : order) {
        out.scheduled.push_back(p.id);
        scheduled.insert(p.id);
    }
    out.instance.packets = order;
    for (const auto& p : bd.packets)
        if (!scheduled.contains(p.id)) out.instance.packets.push_back(p);
    out.instance.check();
    return out;
}

// ---------------------------------------------------------------- random

double FadeProcess::mean() const {
    switch (kind) {
        case Kind::constant: return q;
        case Kind::iid: {
            double m = 0.0;
            for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * probabilities[i];
            return m;
        }
        case Kind::markov: {
            const double flow = p_good_to_bad + p_bad_to_good;
            const double good = flow > 0.0 ? p_bad_to_good / flow : 1.0;
            return good * q_good + (1.0 - good) * q_bad;
        }
    }
    return 0.0;
}

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

Step expected_steps(const FadeProcess& fade) { return static_cast<Step>(std::ceil(1.0 / fade.mean() - 1e-9)); }

/// Portable draws on top of mt19937_64 (std distributions differ across
/// standard libraries, which would break byte-identical suites).
class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}
    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    Step integer(Step lo, Step hi) {
        return lo + static_cast<Step>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool bernoulli(double p) { return unit() < p; }

private:
    std::mt19937_64 rng_;
};

std::vector<double> draw_trace(const FadeProcess& fade, Step horizon, Draw& draw) {
    std::vector<double> q(static_cast<std::size_t>(horizon));
    switch (fade.kind) {
        case FadeProcess::Kind::constant:
            std::fill(q.begin(), q.end(), fade.q);
            break;
        case FadeProcess::Kind::iid:
            for (auto& x : q) {
                double u = draw.unit(), acc = 0.0;
                x = fade.values.back();
                for (std::size_t i = 0; i < fade.values.size(); ++i) {
                    acc += fade.probabilities[i];
                    if (u < acc) {
                        x = fade.values[i];
                        break;
                    }
                }
            }
            break;
        case FadeProcess::Kind::markov: {
            const double flow = fade.p_good_to_bad + fade.p_bad_to_good;
            bool good = draw.bernoulli(flow > 0.0 ? fade.p_bad_to_good / flow : 1.0);
            for (auto& x : q) {
                x = good ? fade.q_good : fade.q_bad;
                good = good ? !draw.bernoulli(fade.p_good_to_bad) : draw.bernoulli(fade.p_bad_to_good);
            }
            break;
        }
    }
    return q;
}

double draw_weight(const WeightDist& dist, Draw& draw) {
    if (dist.kind == WeightDist::Kind::uniform) return draw.uniform(dist.lo, dist.hi);
    const double u = 1.0 - draw.unit();  // (0, 1]
    return std::min(dist.hi, dist.lo * std::pow(u, -1.0 / dist.shape));
}

}  // namespace

void RandomSuiteParams::check() const {
    if (packets_per_instance == 0) throw InputError("packets_per_instance must be positive");
    if (horizon < 1 || release_span < 1 || slack_max < 0) throw InputError("horizon/release_span/slack invalid");
    if (!(weights.lo > 0.0) || !(weights.hi >= weights.lo)) throw InputError("weight range invalid");
    if (weights.kind == WeightDist::Kind::pareto && !(weights.shape > 0.0)) throw InputError("pareto shape invalid");
    switch (fade.kind) {
        case FadeProcess::Kind::constant:
            if (!in_unit(fade.q)) throw InputError("constant quality outside [0, 1]");
            break;
        case FadeProcess::Kind::iid: {
            if (fade.values.empty() || fade.values.size() != fade.probabilities.size())
                throw InputError("iid fade needs matching values and probabilities");
            double total = 0.0;
            for (std::size_t i = 0; i < fade.values.size(); ++i) {
                if (!in_unit(fade.values[i]) || !in_unit(fade.probabilities[i]))
                    throw InputError("iid fade values and probabilities must lie in [0, 1]");
                total += fade.probabilities[i];
            }
            if (std::abs(total - 1.0) > 1e-9) throw InputError("iid fade probabilities must sum to 1");
            break;
        }
        case FadeProcess::Kind::markov:
            if (!in_unit(fade.q_good) || !in_unit(fade.q_bad) || !in_unit(fade.p_good_to_bad) ||
                !in_unit(fade.p_bad_to_good))
                throw InputError("markov fade parameters must lie in [0, 1]");
            break;
    }
    if (!(fade.mean() > 0.0)) throw InputError("fade process has zero mean quality");
    if (release_span + expected_steps(fade) + slack_max > horizon)
        throw InputError("horizon too short for release span, transmission time and slack");
}

std::vector<NamedInstance> gen_random(const RandomSuiteParams& params) {
    params.check();
    Draw draw(params.seed);
    const Step steps = expected_steps(params.fade);
    std::vector<NamedInstance> suite;
    suite.reserve(params.count);
    for (std::size_t n = 0; n < params.count; ++n) {
        const std::size_t packets = params.vary_packet_count
                                        ? static_cast<std::size_t>(draw.integer(1, static_cast<Step>(params.packets_per_instance)))
                                        : params.packets_per_instance;
        Instance inst;
        inst.trace = FadeTrace(draw_trace(params.fade, params.horizon, draw));
        for (std::size_t i = 0; i < packets; ++i) {
            const Step release = draw.integer(1, params.release_span);
            const double weight = draw_weight(params.weights, draw);
            const Step deadline = release + steps + draw.integer(0, params.slack_max);
            inst.packets.push_back(make_packet("p" + std::to_string(i + 1), release, weight, deadline));
        }
        inst.check();
        suite.push_back({params.name_prefix + "-" + std::to_string(params.seed) + "-" + std::to_string(n), std::move(inst)});
    }
    return suite;
}

std::vector<BoundedDelayInstance> gen_random_bounded_delay(const BoundedDelaySuiteParams& params) {
    if (params.horizon < 1 || params.max_packets == 0 || params.max_packets > kBoundedDelayCap)
        throw InputError("bounded-delay suite parameters invalid");
    Draw draw(params.seed);
    std::vector<BoundedDelayInstance> suite;
    for (std::size_t n = 0; n < params.count; ++n) {
        BoundedDelayInstance bd;
        bd.horizon = params.horizon;
        const Step count = draw.integer(1, static_cast<Step>(params.max_packets));
        for (Step i = 1; i <= count; ++i) {
            const Step release = draw.integer(1, params.horizon);
            const Step deadline = draw.integer(release, params.horizon);
            bd.packets.push_back(make_packet("b" + std::to_string(i), release,
                                             draw.uniform(params.weight_lo, params.weight_hi), deadline));
        }
        suite.push_back(std::move(bd));
    }
    return suite;
}

}  // namespace fadesched
