/**
 * \file fadesched_cli.cpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 *
 * Command-line front end: gen, run, sweep, oracle, validate, simulate.
 * Exit codes: 0 ok, 1 config/input error, 2 validation violation,
 * 3 oracle cap exceeded with skips disallowed.
 */

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "fadesched/engine.hpp"
#include "fadesched/harness.hpp"
#include "fadesched/io.hpp"
#include "fadesched/lab.hpp"
#include "fadesched/oracle.hpp"
#include "fadesched/policies.hpp"

namespace fs = std::filesystem;
using namespace fadesched;

namespace {

enum Exit { kOk = 0, kConfig = 1, kViolation = 2, kCapExceeded = 3 };

json spec_argument(const std::string& text) {
    if (fs::exists(text)) return read_json_file(text);
    try {
        return json::parse(text);
    } catch (const json::exception&) {
        throw ConfigError("--spec is neither a file nor inline JSON: " + text);
    }
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        write_text_file(path, text);
}

int cmd_gen(const std::string& spec_text, const std::string& reduce_path, const std::string& out_dir) {
    if (!reduce_path.empty()) {
        const auto bd = bounded_delay_from_json(read_json_file(reduce_path));
        const ReducedInstance reduced = reduce_bounded_delay(bd);
        const std::string stem = fs::path(reduce_path).stem().string() + "-reduced";
        emit(out_dir.empty() ? "-" : (fs::path(out_dir) / (stem + ".json")).string(),
             to_json(reduced.instance).dump(2) + "\n");
        return kOk;
    }
    const GeneratorSpec spec = generator_from_json(spec_argument(spec_text), 1);
    std::vector<NamedInstance> instances;
    std::vector<Expectation> expected;
    switch (spec.kind) {
        case GeneratorSpec::Kind::ratio2: {
            auto fam = gen_ratio2_family();
            instances = std::move(fam.instances);
            expected = std::move(fam.expected);
            break;
        }
        case GeneratorSpec::Kind::phi: {
            auto fam = gen_phi_instance();
            instances = std::move(fam.instances);
            expected = std::move(fam.expected);
            break;
        }
        case GeneratorSpec::Kind::random: instances = gen_random(spec.random); break;
    }
    const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    for (const auto& named : instances) {
        write_text_file(dir / (named.name + ".json"), to_json(named.instance).dump(2) + "\n");
        std::vector<Expectation> mine;
        for (const auto& e : expected)
            if (e.instance == named.name) mine.push_back(e);
        if (!mine.empty()) write_text_file(dir / (named.name + ".expected.json"), to_json(mine).dump(2) + "\n");
    }
    std::cerr << "wrote " << instances.size() << " instances to " << dir.string() << "\n";
    return kOk;
}

int cmd_run(const std::string& config_path, std::string csv, std::string json_out) {
    const ExperimentConfig config = config_from_json(read_json_file(config_path));
    const Report report = run_experiment(config);
    if (csv.empty()) csv = config.csv_path;
    if (json_out.empty()) json_out = config.json_path;
    emit(csv, report_csv(report));
    if (!json_out.empty()) emit(json_out, report_json(report).dump(2) + "\n");
    for (const auto& s : report.summary)
        std::cerr << s.policy << " [" << to_string(s.mode) << "] rows=" << s.rows << " skipped=" << s.skipped
                  << " max_ratio=" << format_number(s.max_ratio) << " mean_ratio=" << format_number(s.mean_ratio)
                  << "\n";
    return kOk;
}

int cmd_sweep(const std::string& param, double lo, double hi, std::size_t steps, const std::string& suite_text,
              std::size_t cap, unsigned threads, const std::string& csv) {
    const GeneratorSpec spec = generator_from_json(spec_argument(suite_text), 1);
    const auto suite = generate(spec);
    emit(csv, sweep_csv(param, sweep(param, lo, hi, steps, suite, cap, threads)));
    return kOk;
}

int cmd_oracle(const std::string& path, std::size_t cap) {
    const AnyInstance any = any_instance_from_json(read_json_file(path));
    if (const auto* bd = std::get_if<BoundedDelayInstance>(&any)) {
        const auto best = bounded_delay_optimal(*bd);
        json slots = json::array();
        for (const auto& [slot, id] : best.slots) slots.push_back({{"slot", slot}, {"packet_id", id}});
        std::cout << json{{"value", best.value}, {"schedule", slots}}.dump(2) << "\n";
        return kOk;
    }
    std::cout << to_json(offline_optimal(std::get<Instance>(any), cap)).dump(2) << "\n";
    return kOk;
}

int cmd_validate(const std::string& path, const std::string& outcome_path, const std::string& log_path) {
    const AnyInstance any = any_instance_from_json(read_json_file(path));
    if (outcome_path.empty() && log_path.empty()) {
        std::cout << "ok\n";
        return kOk;
    }
    const auto* inst = std::get_if<Instance>(&any);
    if (!inst) throw ConfigError("outcomes and logs are only defined for fading-channel instances");
    int code = kOk;
    if (!outcome_path.empty()) {
        const auto violations = validate_outcome(*inst, outcome_from_json(read_json_file(outcome_path)));
        for (const auto& v : violations) std::cout << to_string(v.kind) << ": " << v.message << "\n";
        if (!violations.empty()) code = kViolation;
    }
    if (!log_path.empty()) {
        std::ifstream in(log_path);
        if (!in) throw ConfigError("cannot open '" + log_path + "'");
        try {
            replay(*inst, read_jsonl(in));
        } catch (const ReplayMismatch& e) {
            std::cout << "log: " << e.what() << "\n";
            code = kViolation;
        }
    }
    if (code == kOk) std::cout << "ok\n";
    return code;
}

int cmd_simulate(const std::string& path, const std::string& policy_spec, const std::string& mode_text,
                 const std::string& log_path) {
    const Instance inst = instance_from_json(read_json_file(path));
    const auto policy = make_policy(policy_spec);
    const VisibilityMode mode = mode_text.empty() ? (policy->needs_fade_knowledge()
                                                         ? VisibilityMode::fade_known
                                                         : VisibilityMode::fade_unknown_with_commit_oracle)
                                                  : parse_mode(mode_text);
    const RunResult result = run(inst, *policy, mode);
    if (!log_path.empty()) {
        std::ostringstream os;
        write_jsonl(os, result.log);
        emit(log_path, os.str());
    }
    std::cout << to_json(result.outcome).dump(2) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online packet scheduling over fading channels: simulation and competitive analysis"};
    app.require_subcommand(1);

    std::string spec, reduce, out_dir;
    auto* gen = app.add_subcommand("gen", "Emit instances from a generator spec");
    gen->add_option("--spec", spec, "Generator spec: JSON file or inline JSON ({\"kind\": \"random\"|\"ratio2\"|\"phi\", ...})");
    gen->add_option("--reduce", reduce, "Reduce a bounded-delay instance file to a fading-channel instance");
    gen->add_option("-o,--out-dir", out_dir, "Output directory");

    std::string config, csv, json_out;
    auto* runc = app.add_subcommand("run", "Run an experiment from a config file");
    runc->add_option("config", config, "Experiment config (JSON)")->required();
    runc->add_option("--csv", csv, "CSV report path ('-' for stdout)");
    runc->add_option("--json", json_out, "JSON report path");

    std::string param = "alpha", suite;
    double lo = 1.1, hi = 3.0;
    std::size_t steps = 10, cap = kDefaultOracleCap;
    unsigned threads = 1;
    auto* sw = app.add_subcommand("sweep", "Maximum observed ratio as a function of alpha or beta");
    sw->add_option("--param", param, "alpha (semi-greedy) or beta (edf)")->check(CLI::IsMember({"alpha", "beta"}));
    sw->add_option("--lo", lo, "Lowest parameter value (> 1)");
    sw->add_option("--hi", hi, "Highest parameter value (<= 4)");
    sw->add_option("--steps", steps, "Number of parameter values");
    sw->add_option("--suite", suite, "Generator spec for the suite")->required();
    sw->add_option("--cap", cap, "Oracle packet cap");
    sw->add_option("--threads", threads, "Worker threads");
    sw->add_option("--csv", csv, "CSV output path ('-' for stdout)");

    std::string instance_path;
    auto* orc = app.add_subcommand("oracle", "Print the offline optimum of one instance");
    orc->add_option("instance", instance_path, "Instance file")->required();
    orc->add_option("--cap", cap, "Oracle packet cap");

    std::string outcome_path, log_path;
    auto* val = app.add_subcommand("validate", "Check an instance, and optionally an outcome or decision log");
    val->add_option("instance", instance_path, "Instance file")->required();
    val->add_option("--outcome", outcome_path, "Outcome JSON to validate against the instance");
    val->add_option("--log", log_path, "Decision log (JSON Lines) to replay against the instance");

    std::string policy_spec, mode;
    auto* sim = app.add_subcommand("simulate", "Run one policy on one instance");
    sim->add_option("instance", instance_path, "Instance file")->required();
    sim->add_option("--policy", policy_spec, "Policy, e.g. semi-greedy:alpha=phi or edf:beta=2")->required();
    sim->add_option("--mode", mode, "fade-known or fade-unknown");
    sim->add_option("--log", log_path, "Write the decision log (JSON Lines) here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            if (spec.empty() == reduce.empty()) throw ConfigError("gen needs exactly one of --spec or --reduce");
            return cmd_gen(spec, reduce, out_dir);
        }
        if (*runc) return cmd_run(config, csv, json_out);
        if (*sw) return cmd_sweep(param, lo, hi, steps, suite, cap, threads, csv);
        if (*orc) return cmd_oracle(instance_path, cap);
        if (*val) return cmd_validate(instance_path, outcome_path, log_path);
        if (*sim) return cmd_simulate(instance_path, policy_spec, mode, log_path);
    } catch (const SkipDisallowed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCapExceeded;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCapExceeded;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kConfig;
    } catch (const PolicyContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
    return kOk;
}
