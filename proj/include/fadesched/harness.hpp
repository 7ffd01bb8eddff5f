/**
 * \file harness.hpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 *
 * Experiment driver: runs policies against the offline oracle and reports
 * empirical competitive ratios (opt / online, strict, no additive slack).
 */

#ifndef FADESCHED_HARNESS_HPP
#define FADESCHED_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fadesched/io.hpp"
#include "fadesched/lab.hpp"

namespace fadesched {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PolicyRun {
    std::string spec;  // e.g. "semi-greedy:alpha=phi"
    VisibilityMode mode = VisibilityMode::fade_unknown_with_commit_oracle;
};

struct GeneratorSpec {
    enum class Kind { random, ratio2, phi } kind = Kind::random;
    RandomSuiteParams random;
};

struct ExperimentConfig {
    std::vector<std::string> instance_files;  // paths; '*' wildcards allowed in the file name, *.expected.json skipped
    std::vector<GeneratorSpec> generators;
    std::vector<PolicyRun> policies;
    std::size_t oracle_cap = kDefaultOracleCap;
    bool allow_skips = true;
    std::string csv_path;
    std::string json_path;
    std::uint64_t seed = 1;
    unsigned threads = 1;

    /// Throws ConfigError for illegal policy/mode pairs or bad caps.
    void check() const;
};

GeneratorSpec generator_from_json(const json& j, std::uint64_t default_seed);
std::vector<NamedInstance> generate(const GeneratorSpec& spec);

ExperimentConfig config_from_json(const json& j);
std::vector<NamedInstance> load_instances(const ExperimentConfig& config);

struct ReportRow {
    std::string instance_id;
    std::string policy;
    VisibilityMode mode = VisibilityMode::fade_unknown_with_commit_oracle;
    double online_value = 0.0;
    double opt_value = 0.0;
    double ratio = 1.0;  // +inf when online = 0 < opt
    std::optional<double> max_chain_ratio;  // SEMI-GREEDY rows only
    bool chains_within_bound = true;
    bool skipped = false;
    std::string reason;
};

struct PolicySummary {
    std::string policy;
    VisibilityMode mode;
    std::size_t rows = 0;
    std::size_t skipped = 0;
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
};

struct Report {
    std::vector<ReportRow> rows;  // ordered by (instance id, policy, mode)
    std::vector<PolicySummary> summary;
    std::size_t rows_in = 0;
    std::size_t rows_skipped = 0;
};

/// opt / online with the conventions of ReportRow::ratio.
double competitive_ratio(double opt, double online);

/// Thrown when a row had to be skipped and the config disallows skips.
struct SkipDisallowed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Report run_experiment(const ExperimentConfig& config, const std::vector<NamedInstance>& instances);
Report run_experiment(const ExperimentConfig& config);

std::string report_csv(const Report& report);
json report_json(const Report& report);

struct SweepPoint {
    double value = 0.0;
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    std::size_t instances = 0;
    std::size_t skipped = 0;
};

/// "alpha" sweeps SEMI-GREEDY under fade-unknown, "beta" sweeps EDF under
/// fade-known. Values are `steps` evenly spaced points in [lo, hi] within (1, 4].
std::vector<SweepPoint> sweep(const std::string& parameter, double lo, double hi, std::size_t steps,
                              const std::vector<NamedInstance>& suite, std::size_t oracle_cap = kDefaultOracleCap,
                              unsigned threads = 1);

std::string sweep_csv(const std::string& parameter, const std::vector<SweepPoint>& points);

/// "%.12g", with "inf" for infinity.
std::string format_number(double v);

}  // namespace fadesched

#endif  // FADESCHED_HARNESS_HPP
