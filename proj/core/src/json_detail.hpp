// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
//
// Internal JSON plumbing shared by the .cpp files. Not installed.
#pragma once

#include <string>

#include "json.hpp"

#include "bolt/core.hpp"
#include "bolt/oracle.hpp"

namespace bolt::detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// %.17g keeps doubles exact on round-trip while staying byte-stable.
std::string format_double_17g(double v);

// Sorted keys, no whitespace, floats via format_double_17g. These bytes are
// what gets hashed and what lands on disk.
std::string canonical_dump(const json& j);

// {"payload":...,"schema_version":1,"sha256":...} with the hash taken over
// the canonical payload bytes.
std::string wrap_document(const json& payload);
// Verifies schema_version and hash; throws SchemaVersionMismatch/CorruptFile.
json unwrap_document(const std::string& text);

json candidate_to_json(const Candidate& c);
Candidate candidate_from_json(const json& j);

json outcome_to_json(const Outcome& o);
Outcome outcome_from_json(const json& j);

json observation_to_json(const Observation& obs);
Observation observation_from_json(const json& j);

json task_spec_to_json(const TaskSpec& spec);
TaskSpec task_spec_from_json(const json& j);

}  // namespace bolt::detail
