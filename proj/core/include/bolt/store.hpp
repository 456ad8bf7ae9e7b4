// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bolt/core.hpp"

namespace bolt {

std::string sha256_hex(std::string_view bytes);

// Re-dumps JSON text in canonical form: sorted keys, no whitespace, floats
// printed with 17 significant digits. All hashed artifacts use these bytes.
std::string canonical_json(std::string_view json_text);

struct PolicyLineageEntry {
    std::string policy_id;  // "BOLT-<cumulative task count>"
    int cumulative_tasks = 0;
    std::string policy_sha256;
    std::string dataset_sha256;
    bool operator==(const PolicyLineageEntry&) const = default;
};

struct RunManifest {
    int schema_version = 1;
    std::string run_name;
    std::string config_sha256;
    std::string workload_sha256;
    std::string status = "in_progress";  // in_progress | awaiting_finetune | complete
    int completed_rounds = 0;
    std::vector<PolicyLineageEntry> lineage;
    std::map<std::string, std::string> artifacts;  // run-relative path -> sha256

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
};

// One run directory:
//   <run>/manifest.json
//   <run>/round_<i>/trajectories/<task>.jsonl
//   <run>/round_<i>/finetune.jsonl
//   <run>/round_<i>/report.json
//   <run>/round_<i>/policy.json
// plus inner/, sa/, fewshot/ subtrees for the single-shot subcommands.
// One writer per directory, guarded by an advisory .lock file; concurrent
// readers are fine.
class RunStore {
public:
    explicit RunStore(std::filesystem::path dir, bool create = true);
    ~RunStore();

    RunStore(const RunStore&) = delete;
    RunStore& operator=(const RunStore&) = delete;

    const std::filesystem::path& dir() const { return dir_; }

    void lock();  // throws LockedRun when another writer holds the directory
    void unlock() noexcept;

    bool exists(const std::string& rel) const;

    // Writes are idempotent: identical bytes are a no-op, different bytes for
    // an existing file throw CorruptFile (never silently clobbered).
    // Returns the content hash.
    std::string write_artifact(const std::string& rel, const std::string& bytes);

    std::string read_artifact(const std::string& rel) const;
    // Load guarded by a hash: mismatches throw CorruptFile.
    std::string read_artifact_checked(const std::string& rel,
                                      const std::string& expected_sha256) const;

    bool has_manifest() const;
    RunManifest load_manifest() const;
    void save_manifest(const RunManifest& manifest);  // always overwrites

    static std::string round_rel(int round);  // "round_<i>"

private:
    std::filesystem::path dir_;
    bool locked_ = false;
};

}  // namespace bolt
