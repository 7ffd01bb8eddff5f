/**
 * \file io.hpp
 *
 * Copyright 2026 The fadesched Authors.
 * License: Apache License 2.0
 *
 * JSON interchange for instances, bounded-delay instances, outcomes and
 * expectation sidecars.
 */

#ifndef FADESCHED_IO_HPP
#define FADESCHED_IO_HPP

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fadesched/lab.hpp"
#include "fadesched/model.hpp"
#include "fadesched/oracle.hpp"

namespace fadesched {

using nlohmann::json;

json to_json(const Instance& inst);
Instance instance_from_json(const json& j);

/// Same schema without `qualities`, tagged `"model": "bounded-delay"`.
json to_json(const BoundedDelayInstance& bd);
BoundedDelayInstance bounded_delay_from_json(const json& j);

using AnyInstance = std::variant<Instance, BoundedDelayInstance>;
AnyInstance any_instance_from_json(const json& j);

json to_json(const ScheduleOutcome& out);
ScheduleOutcome outcome_from_json(const json& j);

json to_json(const std::vector<Expectation>& expected);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace fadesched

#endif  // FADESCHED_IO_HPP
