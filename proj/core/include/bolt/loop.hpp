// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bolt/acquire.hpp"
#include "bolt/policy.hpp"
#include "bolt/remote.hpp"
#include "bolt/store.hpp"
#include "bolt/workload.hpp"

namespace bolt {

struct InnerConfig {
    int budget = 300;
    int batch = 5;
    int init_count = 50;
    int top_k = 5;
    double temperature = -1.0;  // < 0 -> domain default
    std::uint64_t rng_seed = 0;
};

enum class DatasetMode { Append, ReplaceOldest };
std::string to_string(DatasetMode m);
DatasetMode dataset_mode_from_string(const std::string& s);

struct OuterConfig {
    int rounds = 3;
    int tasks_per_round = 20;
    bool retrain_each_round = true;
    DatasetMode dataset_mode = DatasetMode::Append;
};

struct InnerResult {
    Trajectory trajectory;
    int pad_count = 0;
    std::optional<double> init_best;  // best exact value among the initialization calls
    int calls = 0;
    int censored_calls = 0;
};

// One BO run: policy (or fallback) initialization, GP fit (censored-aware),
// then floor((B - init) / b) acquire-evaluate-refit steps. A BudgetExhausted
// mid-loop truncates gracefully and returns the partial trajectory.
InnerResult inner_loop(const TaskSpec& task, PolicyRef policy, const InnerConfig& cfg,
                       const AcquisitionConfig& acq);

inline InnerResult inner_loop(const TaskSpec& task, const NGramPolicy* policy,
                              const InnerConfig& cfg, const AcquisitionConfig& acq) {
    return inner_loop(task, PolicyRef{policy, nullptr}, cfg, acq);
}

// Turns each trajectory's top-k candidates into FinetuneRecords with that
// task's context. Append concatenates onto `prior`; ReplaceOldest drops the
// oldest equal count from `prior` first, keeping the dataset size fixed.
std::vector<FinetuneRecord> build_finetune_dataset(const std::vector<Trajectory>& trajectories,
                                                   const std::vector<TaskContext>& contexts,
                                                   Domain domain, int k, DatasetMode mode,
                                                   std::vector<FinetuneRecord> prior);

struct TaskReport {
    TaskId task;
    std::uint64_t rng_seed = 0;
    int calls = 0;
    int censored_calls = 0;
    int pad_count = 0;
    std::optional<double> init_best;
    std::optional<double> final_incumbent;
    std::string trajectory_sha256;
};

struct RoundReport {
    int round = 0;
    std::string policy_id;  // policy produced after this round: BOLT-<cumulative tasks>
    std::string policy_sha256;
    int dataset_size = 0;
    std::vector<TaskReport> tasks;  // sorted by task id
    double summed_final_incumbent = 0.0;
    double summed_init_best = 0.0;
    double mean_pad_rate = 0.0;

    std::string to_json() const;
    static RoundReport from_json(const std::string& text);
};

struct PolicyBackend {
    enum class Kind { NGram, Remote };
    Kind kind = Kind::NGram;
    int order = 3;
    double alpha = 0.5;
    int epochs = 1;
    RemoteLLMConfig remote;
};

struct OuterResult {
    std::vector<RoundReport> rounds;
    NGramPolicy policy;  // latest trained policy (n-gram backend)
    bool has_policy = false;
    std::vector<FinetuneRecord> dataset;
    bool awaiting_finetune = false;  // remote backend paused at the retrain step
    bool already_complete = false;
};

// In-memory outer loop; consumes workload train tasks in order without
// replacement. Tasks within a round run on `workers` threads; results are
// independent of the thread count.
OuterResult outer_loop(const Workload& workload, const OuterConfig& outer,
                       const InnerConfig& inner, const AcquisitionConfig& acq,
                       const PolicyBackend& backend, int workers = 1, int stop_after_round = 0);

struct RunOuterOptions {
    int workers = 1;
    int stop_after_round = 0;        // 0 = run every configured round
    std::string resume_model_name;   // remote backend: operator-supplied model id
};

// Persistent variant: writes rounds under run_dir, maintains the manifest,
// and auto-resumes from the last completed round barrier when invoked again
// with the same config. Re-running a completed run is a no-op.
OuterResult run_outer(const std::filesystem::path& run_dir, const std::string& run_name,
                      const Workload& workload, const OuterConfig& outer,
                      const InnerConfig& inner, const AcquisitionConfig& acq,
                      const PolicyBackend& backend, const RunOuterOptions& options = {});

// Self-augmentation: sample from the policy on each task, oracle-score the
// sanitized samples (every scoring call budget-charged), keep those passing
// the criterion, retrain on dataset + accepted.
using SaCriterion = std::function<bool(const TaskSpec&, double)>;
SaCriterion default_sa_criterion();

struct SelfAugmentResult {
    std::vector<FinetuneRecord> accepted;  // dataset delta
    NGramPolicy policy;                    // retrained policy
    int sampled = 0;
    int scored = 0;  // oracle calls charged
};

SelfAugmentResult self_augment(const NGramPolicy& policy,
                               const std::vector<FinetuneRecord>& dataset,
                               std::span<const TaskSpec> tasks, int samples_per_task,
                               const SaCriterion& criterion, Budget& budget, double temperature,
                               std::uint64_t rng_seed, int epochs = 1);

struct FewshotSample {
    TaskId task;
    int index = 0;  // 0-based sample position within the task's stream
    bool accepted = false;
    double value = 0.0;  // oracle value, or the task's fallback value when rejected
};

struct FewshotResult {
    std::vector<int> ks;
    std::vector<double> best_at_k;  // summed over tasks, aligned with ks
    std::vector<FewshotSample> samples;
};

// Draws max(ks) samples per task once; Best@k = sum over tasks of the minimum
// value among the first k samples. Rejected samples score as the task's
// fallback value so every k is defined. policy == nullptr evaluates the
// fallback initializer instead.
FewshotResult eval_fewshot(const NGramPolicy* policy, std::span<const TaskSpec> tasks,
                           const std::vector<int>& ks, double temperature, Budget& budget,
                           std::uint64_t rng_seed);

// Recomputes the Best@k row from stored samples (pure view used by reports).
std::vector<double> best_at_k_from_samples(const std::vector<FewshotSample>& samples,
                                           const std::vector<int>& ks);

std::string fewshot_samples_to_jsonl(const std::vector<FewshotSample>& samples);
std::vector<FewshotSample> fewshot_samples_from_jsonl(const std::string& text);

}  // namespace bolt
