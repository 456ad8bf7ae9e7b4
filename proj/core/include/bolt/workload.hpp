// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bolt/oracle.hpp"

namespace bolt {

// A generated set of tasks with a train/validation partition. The last
// n_validation tasks are held out; validation tasks never feed policy
// training.
struct Workload {
    Domain domain = Domain::Query;
    std::uint64_t seed = 0;
    int n_validation = 0;
    std::vector<TaskSpec> tasks;

    int n_train() const { return static_cast<int>(tasks.size()) - n_validation; }
    std::span<const TaskSpec> train_tasks() const {
        return {tasks.data(), static_cast<std::size_t>(n_train())};
    }
    std::span<const TaskSpec> validation_tasks() const {
        return {tasks.data() + n_train(), static_cast<std::size_t>(n_validation)};
    }
    const TaskSpec* find(const TaskId& id) const;
};

struct WorkloadParams {
    int n_relations = 8;
    int seq_min_len = 15;
    int seq_max_len = 30;
    double noise_sigma = 0.0;
};

Workload gen_workload(Domain domain, int n_tasks, int n_validation, std::uint64_t seed,
                      const WorkloadParams& params = {});

// Single JSON document {"schema_version":1,"sha256":...,"payload":{...}};
// the hash covers the canonical payload bytes and is verified on load.
std::string workload_to_json(const Workload& w);
Workload workload_from_json(const std::string& text);

// Hash of the canonical payload; identifies the workload in run manifests.
std::string workload_sha256(const Workload& w);

}  // namespace bolt
