// Copyright 2026 The fadesched Authors.
// License: Apache License 2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <limits>

#include "fadesched/harness.hpp"
#include "fadesched/io.hpp"
#include "fadesched/lab.hpp"
#include "test_support.hpp"

using namespace fadesched;
namespace fs = std::filesystem;

namespace {

ExperimentConfig config_with(std::vector<PolicyRun> runs) {
    ExperimentConfig c;
    c.policies = std::move(runs);
    return c;
}

const PolicyRun kNonAbort{"nonabort-commit", VisibilityMode::fade_unknown_with_commit_oracle};
const PolicyRun kSemiGreedy{"semi-greedy:alpha=phi", VisibilityMode::fade_unknown_with_commit_oracle};
const PolicyRun kEdf{"edf:beta=2", VisibilityMode::fade_known};

}  // namespace

TEST_CASE("ratio conventions") {
    CHECK(competitive_ratio(2.0, 1.0) == 2.0);
    CHECK(competitive_ratio(0.0, 0.0) == 1.0);
    CHECK(std::isinf(competitive_ratio(1.0, 0.0)));
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(kPhi) == "1.61803398875");
    CHECK(format_number(2.0) == "2");
}

TEST_CASE("empty input gives a header-only report") {
    const Report r = run_experiment(config_with({kNonAbort}), {});
    CHECK(r.rows.empty());
    CHECK(report_csv(r) == "instance_id,policy,mode,online_value,opt_value,ratio,max_chain_ratio,skipped,reason\n");
    REQUIRE(r.summary.size() == 1);
    CHECK(r.summary[0].rows == 0);
}

TEST_CASE("lower-bound instances through the harness") {
    const auto fam = gen_ratio2_family();
    Report r = run_experiment(config_with({kNonAbort}), fam.instances);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].instance_id == "ratio2-a");
    CHECK(r.rows[0].ratio == 2.0);
    CHECK(r.summary[0].max_ratio == 2.0);

    r = run_experiment(config_with({kNonAbort}), {gen_phi_instance().instances[0]});
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].online_value == 1.0);
    CHECK(r.rows[0].ratio == doctest::Approx(kPhi).epsilon(1e-6));
}

TEST_CASE("semi-greedy rows carry chain ratios") {
    const auto suite = testing::small_suite(60, 8, 9);
    const Report r = run_experiment(config_with({kSemiGreedy, kNonAbort, kEdf}), suite);
    CHECK(r.rows.size() == 180);
    for (const auto& row : r.rows) {
        CHECK(row.max_chain_ratio.has_value() == (row.policy.rfind("semi-greedy", 0) == 0));
        CHECK(row.chains_within_bound);
        CHECK(row.ratio >= 1.0 - 1e-12);
    }
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        const auto& a = r.rows[i - 1];
        const auto& b = r.rows[i];
        CHECK((a.instance_id < b.instance_id || (a.instance_id == b.instance_id && a.policy <= b.policy)));
    }
}

TEST_CASE("invalid configs are rejected") {
    CHECK_THROWS_AS(config_with({{"edf:beta=2", VisibilityMode::fade_unknown_with_commit_oracle}}).check(), ConfigError);
    CHECK_THROWS_AS(config_with({{"bogus", VisibilityMode::fade_known}}).check(), ConfigError);
    auto c = config_with({kNonAbort});
    c.oracle_cap = 0;
    CHECK_THROWS_AS(c.check(), ConfigError);
    c = config_with({kNonAbort});
    c.threads = 0;
    CHECK_THROWS_AS(c.check(), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"generators": []})")), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"policies": [{"policy": "greedy-max", "mode": "sideways"}]})")),
                    std::exception);
    CHECK_THROWS_AS(generator_from_json(json::parse(R"({"kind": "lottery"})"), 1), ConfigError);
}

TEST_CASE("config parsing") {
    const auto c = config_from_json(json::parse(R"({
        "generators": [{"kind": "ratio2"},
                       {"kind": "random", "count": 5, "packets": 4, "fade": {"kind": "iid", "values": [1, 0.5],
                        "probabilities": [0.5, 0.5]}, "weights": {"kind": "pareto", "lo": 1, "hi": 30}}],
        "policies": ["semi-greedy:alpha=phi", "edf:beta=2", {"policy": "greedy-max", "mode": "fade-known"}],
        "oracle_cap": 10, "allow_skips": false, "seed": 7, "threads": 2})"));
    REQUIRE(c.generators.size() == 2);
    CHECK(c.generators[0].kind == GeneratorSpec::Kind::ratio2);
    CHECK(c.generators[1].random.count == 5);
    CHECK(c.generators[1].random.seed == 7);
    CHECK(c.generators[1].random.fade.kind == FadeProcess::Kind::iid);
    CHECK(c.generators[1].random.weights.kind == WeightDist::Kind::pareto);
    REQUIRE(c.policies.size() == 3);
    CHECK(c.policies[1].mode == VisibilityMode::fade_known);
    CHECK(c.policies[2].mode == VisibilityMode::fade_known);
    CHECK(c.oracle_cap == 10);
    CHECK_FALSE(c.allow_skips);
    CHECK(c.threads == 2);
    CHECK(load_instances(c).size() == 7);
}

TEST_CASE("skips are counted and can be forbidden") {
    RandomSuiteParams p;
    p.count = 10;
    p.packets_per_instance = 5;
    p.vary_packet_count = true;
    p.seed = 3;
    const auto suite = gen_random(p);
    std::size_t big = 0;
    for (const auto& n : suite) big += n.instance.packets.size() > 3;
    REQUIRE(big > 0);

    auto c = config_with({kNonAbort, kSemiGreedy});
    c.oracle_cap = 3;
    const Report r = run_experiment(c, suite);
    CHECK(r.rows_in == 20);
    CHECK(r.rows_skipped == 2 * big);
    CHECK(r.summary[0].skipped == big);
    for (const auto& row : r.rows)
        if (row.skipped) CHECK_FALSE(row.reason.empty());
    const json j = report_json(r);
    CHECK(j.at("summary").at("rows_skipped") == 2 * big);

    c.allow_skips = false;
    CHECK_THROWS_AS(run_experiment(c, suite), SkipDisallowed);
}

TEST_CASE("reports are deterministic across runs and thread counts") {
    const fs::path dir = fs::temp_directory_path() / "fadesched_harness_test";
    fs::create_directories(dir);
    const std::string text = R"({
        "generators": [{"kind": "random", "count": 40, "packets": 7, "vary_packet_count": true,
                        "fade": {"kind": "markov"}}, {"kind": "phi"}],
        "policies": ["semi-greedy:alpha=phi", "edf:beta=2", "baseline-edf"], "seed": 11})";
    auto c = config_from_json(json::parse(text));
    const Report a = run_experiment(c);
    const Report b = run_experiment(c);
    c.threads = 3;
    const Report t = run_experiment(c);
    CHECK(report_csv(a) == report_csv(b));
    CHECK(report_csv(a) == report_csv(t));
    CHECK(report_json(a).dump() == report_json(b).dump());
    CHECK(report_json(a).dump() == report_json(t).dump());

    // same thing through files
    for (const auto& n : load_instances(c)) write_text_file(dir / (n.name + ".json"), to_json(n.instance).dump(2));
    ExperimentConfig from_files = config_with(c.policies);
    from_files.instance_files = {(dir / "*.json").string()};
    const Report f = run_experiment(from_files);
    CHECK(f.rows.size() == a.rows.size());
    CHECK(report_csv(f) == report_csv(a));
    fs::remove_all(dir);
}

TEST_CASE("sweep gives one row per parameter value") {
    const auto suite = testing::small_suite(30, 6, 8);
    const auto alpha = sweep("alpha", 1.2, 3.0, 7, suite);
    REQUIRE(alpha.size() == 7);
    CHECK(alpha.front().value == doctest::Approx(1.2));
    CHECK(alpha.back().value == doctest::Approx(3.0));
    for (const auto& pt : alpha) {
        CHECK(pt.instances == 30);
        CHECK(pt.max_ratio >= 1.0);
        CHECK(pt.mean_ratio <= pt.max_ratio);
    }
    CHECK(sweep("beta", 2.0, 2.0, 1, suite).size() == 1);
    const std::string csv = sweep_csv("alpha", alpha);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
    CHECK_THROWS_AS(sweep("alpha", 1.0, 2.0, 3, suite), ConfigError);
    CHECK_THROWS_AS(sweep("alpha", 2.0, 5.0, 3, suite), ConfigError);
    CHECK_THROWS_AS(sweep("gamma", 2.0, 3.0, 3, suite), ConfigError);
}
