// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <string>

namespace bolt {

enum class Domain { Query, Sequence };

std::string to_string(Domain d);
Domain domain_from_string(const std::string& s);

// Sampling temperature applied when none is configured explicitly.
double default_temperature(Domain d);

// Stable identifier of a task within a workload.
struct TaskId {
    std::string value;
    auto operator<=>(const TaskId&) const = default;
};

// The task description handed to the policy: the serialized query spec or the
// seed sequence. Uniquely identifies the objective within its domain, and is
// the only task information a policy is ever allowed to see.
struct TaskContext {
    std::string text;
    bool operator==(const TaskContext&) const = default;
};

}  // namespace bolt
