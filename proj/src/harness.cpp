/**
 * \file harness.cpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 */

#include "fadesched/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "fadesched/policies.hpp"

namespace fadesched {

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double competitive_ratio(double opt, double online) {
    if (online > 0.0) return opt / online;
    return opt > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
}

// ---------------------------------------------------------------- config

namespace {

WeightDist weights_from_json(const json& j) {
    WeightDist w;
    const auto kind = j.value("kind", std::string("uniform"));
    if (kind == "uniform")
        w.kind = WeightDist::Kind::uniform;
    else if (kind == "pareto" || kind == "heavy-tail")
        w.kind = WeightDist::Kind::pareto;
    else
        throw ConfigError("unknown weight distribution '" + kind + "'");
    w.lo = j.value("lo", w.lo);
    w.hi = j.value("hi", w.hi);
    w.shape = j.value("shape", w.shape);
    return w;
}

FadeProcess fade_from_json(const json& j) {
    FadeProcess f;
    const auto kind = j.value("kind", std::string("constant"));
    if (kind == "constant") {
        f.kind = FadeProcess::Kind::constant;
        f.q = j.value("q", f.q);
    } else if (kind == "iid") {
        f.kind = FadeProcess::Kind::iid;
        f.values = j.at("values").get<std::vector<double>>();
        f.probabilities = j.at("probabilities").get<std::vector<double>>();
    } else if (kind == "markov") {
        f.kind = FadeProcess::Kind::markov;
        f.q_good = j.value("q_good", f.q_good);
        f.q_bad = j.value("q_bad", f.q_bad);
        f.p_good_to_bad = j.value("p_good_to_bad", f.p_good_to_bad);
        f.p_bad_to_good = j.value("p_bad_to_good", f.p_bad_to_good);
    } else {
        throw ConfigError("unknown fade process '" + kind + "'");
    }
    return f;
}

bool wildcard_match(const std::string& pattern, const std::string& text) {
    std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == text[t] || pattern[p] == '?')) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::vector<std::filesystem::path> expand(const std::string& pattern) {
    namespace fs = std::filesystem;
    const fs::path path(pattern);
    const std::string leaf = path.filename().string();
    if (leaf.find_first_of("*?") == std::string::npos) return {path};
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::vector<fs::path> found;
    if (fs::is_directory(dir))
        for (const auto& entry : fs::directory_iterator(dir))
            if (const std::string name = entry.path().filename().string();
                entry.is_regular_file() && wildcard_match(leaf, name) && !name.ends_with(".expected.json"))
                found.push_back(entry.path());  // sidecars from `gen` are not instances
    std::sort(found.begin(), found.end());
    return found;
}

}  // namespace

GeneratorSpec generator_from_json(const json& j, std::uint64_t default_seed) {
    try {
        GeneratorSpec g;
        const auto kind = j.value("kind", std::string("random"));
        if (kind == "ratio2") {
            g.kind = GeneratorSpec::Kind::ratio2;
            return g;
        }
        if (kind == "phi") {
            g.kind = GeneratorSpec::Kind::phi;
            return g;
        }
        if (kind != "random") throw ConfigError("unknown generator '" + kind + "'");
        auto& r = g.random;
        r.count = j.value("count", r.count);
        r.packets_per_instance = j.value("packets", r.packets_per_instance);
        r.vary_packet_count = j.value("vary_packet_count", r.vary_packet_count);
        r.horizon = j.value("horizon", r.horizon);
        r.release_span = j.value("release_span", r.release_span);
        r.slack_max = j.value("slack_max", r.slack_max);
        if (j.contains("weights")) r.weights = weights_from_json(j.at("weights"));
        if (j.contains("fade")) r.fade = fade_from_json(j.at("fade"));
        r.seed = j.value("seed", default_seed);
        r.name_prefix = j.value("name", r.name_prefix);
        r.check();
        return g;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed generator spec: ") + e.what());
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
}

std::vector<NamedInstance> generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
        case GeneratorSpec::Kind::ratio2: return gen_ratio2_family().instances;
        case GeneratorSpec::Kind::phi: return gen_phi_instance().instances;
        case GeneratorSpec::Kind::random: return gen_random(spec.random);
    }
    return {};
}

void ExperimentConfig::check() const {
    if (oracle_cap == 0) throw ConfigError("oracle_cap must be positive");
    if (threads == 0) throw ConfigError("threads must be positive");
    for (const auto& run : policies) {
        std::unique_ptr<OnlinePolicy> policy;
        try {
            policy = make_policy(run.spec);
        } catch (const InputError& e) {
            throw ConfigError(e.what());
        }
        if (policy->needs_fade_knowledge() && run.mode != VisibilityMode::fade_known)
            throw ConfigError("policy '" + run.spec + "' requires fade-known mode");
    }
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    try {
        c.seed = j.value("seed", c.seed);
        c.oracle_cap = j.value("oracle_cap", c.oracle_cap);
        c.allow_skips = j.value("allow_skips", c.allow_skips);
        c.csv_path = j.value("csv", c.csv_path);
        c.json_path = j.value("json", c.json_path);
        c.threads = j.value("threads", c.threads);
        if (j.contains("instances")) c.instance_files = j.at("instances").get<std::vector<std::string>>();
        if (j.contains("generators"))
            for (const json& g : j.at("generators")) c.generators.push_back(generator_from_json(g, c.seed));
        for (const json& p : j.at("policies")) {
            PolicyRun run;
            if (p.is_string()) {
                run.spec = p.get<std::string>();
                if (run.spec.rfind("edf:", 0) == 0) run.mode = VisibilityMode::fade_known;
            } else {
                run.spec = p.at("policy").get<std::string>();
                run.mode = parse_mode(p.value("mode", std::string("fade-unknown")));
            }
            c.policies.push_back(std::move(run));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    c.check();
    return c;
}

std::vector<NamedInstance> load_instances(const ExperimentConfig& config) {
    std::vector<NamedInstance> all;
    for (const auto& pattern : config.instance_files)
        for (const auto& path : expand(pattern)) {
            const json j = read_json_file(path);
            all.push_back({path.stem().string(), instance_from_json(j)});
        }
    for (const auto& g : config.generators) {
        auto more = generate(g);
        all.insert(all.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
    return all;
}

// ---------------------------------------------------------------- experiment

namespace {

struct Evaluation {
    std::optional<double> opt;
    std::string reason;
};

template <typename F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += threads) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

Evaluation evaluate_opt(const Instance& inst, std::size_t cap) {
    try {
        return {offline_optimal(inst, cap).throughput, {}};
    } catch (const ResourceError& e) {
        return {std::nullopt, e.what()};
    }
}

ReportRow evaluate_policy(const NamedInstance& named, const OnlinePolicy& policy, VisibilityMode mode,
                          const Evaluation& opt) {
    ReportRow row;
    row.instance_id = named.name;
    row.policy = policy.name();
    row.mode = mode;
    if (!opt.opt) {
        row.skipped = true;
        row.reason = opt.reason;
        return row;
    }
    const RunResult result = run(named.instance, policy, mode);
    if (auto v = validate_outcome(named.instance, result.outcome); !v.empty())
        throw std::logic_error("engine produced an invalid outcome on '" + named.name + "': " + v.front().message);
    row.online_value = result.outcome.throughput;
    row.opt_value = *opt.opt;
    row.ratio = competitive_ratio(row.opt_value, row.online_value);
    if (const auto* sg = dynamic_cast<const SemiGreedy*>(&policy)) {
        double worst = 1.0;
        for (const Chain& c : extract_chains(result.log, named.instance, sg->alpha())) {
            worst = std::max(worst, c.ratio());
            if (c.ratio() > chain_bound(c.packets.size(), sg->alpha()) + 1e-9) row.chains_within_bound = false;
        }
        row.max_chain_ratio = worst;
    }
    return row;
}

std::vector<PolicySummary> summarize(const std::vector<PolicyRun>& runs, const std::vector<ReportRow>& rows) {
    std::vector<PolicySummary> out;
    for (const auto& run : runs) {
        PolicySummary s{make_policy(run.spec)->name(), run.mode};
        double sum = 0.0;
        for (const auto& r : rows) {
            if (r.policy != s.policy || r.mode != s.mode) continue;
            if (r.skipped) {
                ++s.skipped;
                continue;
            }
            ++s.rows;
            s.max_ratio = std::max(s.max_ratio, r.ratio);
            sum += r.ratio;
        }
        s.mean_ratio = s.rows ? sum / static_cast<double>(s.rows) : 0.0;
        out.push_back(s);
    }
    return out;
}

std::string csv_field(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

json number_json(double v) { return std::isinf(v) ? json("inf") : json(v); }

}  // namespace

Report run_experiment(const ExperimentConfig& config, const std::vector<NamedInstance>& instances) {
    config.check();
    std::vector<std::unique_ptr<OnlinePolicy>> policies;
    for (const auto& run : config.policies) policies.push_back(make_policy(run.spec));

    const std::size_t width = policies.size();
    std::vector<ReportRow> rows(instances.size() * width);
    parallel_for(instances.size(), config.threads, [&](std::size_t i) {
        const Evaluation opt = evaluate_opt(instances[i].instance, config.oracle_cap);
        for (std::size_t k = 0; k < width; ++k)
            rows[i * width + k] = evaluate_policy(instances[i], *policies[k], config.policies[k].mode, opt);
    });

    Report report;
    report.rows_in = rows.size();
    for (const auto& r : rows)
        if (r.skipped) ++report.rows_skipped;
    if (report.rows_skipped > 0 && !config.allow_skips)
        throw SkipDisallowed(std::to_string(report.rows_skipped) + " rows exceed the oracle cap");

    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
        if (a.policy != b.policy) return a.policy < b.policy;
        return a.mode < b.mode;
    });
    report.summary = summarize(config.policies, rows);
    report.rows = std::move(rows);
    return report;
}

Report run_experiment(const ExperimentConfig& config) { return run_experiment(config, load_instances(config)); }

std::string report_csv(const Report& report) {
    std::ostringstream os;
    os << "instance_id,policy,mode,online_value,opt_value,ratio,max_chain_ratio,skipped,reason\n";
    for (const auto& r : report.rows) {
        os << csv_field(r.instance_id) << ',' << csv_field(r.policy) << ',' << to_string(r.mode) << ',';
        if (r.skipped)
            os << ",,,";
        else
            os << format_number(r.online_value) << ',' << format_number(r.opt_value) << ',' << format_number(r.ratio)
               << ',';
        if (r.max_chain_ratio && !r.skipped) os << format_number(*r.max_chain_ratio);
        os << ',' << (r.skipped ? "true" : "false") << ',' << csv_field(r.reason) << '\n';
    }
    return os.str();
}

json report_json(const Report& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        json row = {{"instance_id", r.instance_id}, {"policy", r.policy}, {"mode", to_string(r.mode)},
                    {"skipped", r.skipped}};
        if (r.skipped) {
            row["reason"] = r.reason;
        } else {
            row["online_value"] = r.online_value;
            row["opt_value"] = r.opt_value;
            row["ratio"] = number_json(r.ratio);
            if (r.max_chain_ratio) row["max_chain_ratio"] = *r.max_chain_ratio;
        }
        rows.push_back(std::move(row));
    }
    json policies = json::array();
    for (const auto& s : report.summary)
        policies.push_back({{"policy", s.policy},
                            {"mode", to_string(s.mode)},
                            {"rows", s.rows},
                            {"skipped", s.skipped},
                            {"max_ratio", number_json(s.max_ratio)},
                            {"mean_ratio", number_json(s.mean_ratio)}});
    return {{"rows", rows},
            {"summary",
             {{"rows_in", report.rows_in},
              {"rows_reported", report.rows_in - report.rows_skipped},
              {"rows_skipped", report.rows_skipped},
              {"policies", policies}}}};
}

// ---------------------------------------------------------------- sweep

std::vector<SweepPoint> sweep(const std::string& parameter, double lo, double hi, std::size_t steps,
                              const std::vector<NamedInstance>& suite, std::size_t oracle_cap, unsigned threads) {
    if (parameter != "alpha" && parameter != "beta") throw ConfigError("sweep parameter must be alpha or beta");
    if (!(lo > 1.0) || !(hi <= 4.0) || hi < lo || steps == 0)
        throw ConfigError("sweep range must satisfy 1 < lo <= hi <= 4 with at least one step");

    std::vector<Evaluation> opts(suite.size());
    parallel_for(suite.size(), threads, [&](std::size_t i) { opts[i] = evaluate_opt(suite[i].instance, oracle_cap); });

    std::vector<SweepPoint> points;
    for (std::size_t s = 0; s < steps; ++s) {
        SweepPoint pt;
        pt.value = steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(steps - 1);
        std::unique_ptr<OnlinePolicy> policy;
        VisibilityMode mode;
        if (parameter == "alpha") {
            policy = std::make_unique<SemiGreedy>(pt.value);
            mode = VisibilityMode::fade_unknown_with_commit_oracle;
        } else {
            policy = std::make_unique<EdfBeta>(pt.value);
            mode = VisibilityMode::fade_known;
        }
        std::vector<ReportRow> rows(suite.size());
        parallel_for(suite.size(), threads,
                     [&](std::size_t i) { rows[i] = evaluate_policy(suite[i], *policy, mode, opts[i]); });
        double sum = 0.0;
        for (const auto& r : rows) {
            if (r.skipped) {
                ++pt.skipped;
                continue;
            }
            ++pt.instances;
            pt.max_ratio = std::max(pt.max_ratio, r.ratio);
            sum += r.ratio;
        }
        pt.mean_ratio = pt.instances ? sum / static_cast<double>(pt.instances) : 0.0;
        points.push_back(pt);
    }
    return points;
}

std::string sweep_csv(const std::string& parameter, const std::vector<SweepPoint>& points) {
    std::ostringstream os;
    os << parameter << ",max_ratio,mean_ratio,instances,skipped\n";
    for (const auto& p : points)
        os << format_number(p.value) << ',' << format_number(p.max_ratio) << ',' << format_number(p.mean_ratio) << ','
           << p.instances << ',' << p.skipped << '\n';
    return os.str();
}

}  // namespace fadesched
