// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bolt/core.hpp"
#include "bolt/rng.hpp"

namespace bolt {

// Multiple of the heuristic plan cost used as the censoring threshold.
inline constexpr double kTimeoutFactor = 20.0;
// Score assigned to the unedited seed sequence (lower is better).
inline constexpr double kSeedScore = 10.0;
// Absolute acceptance threshold for sequence self-augmentation.
inline constexpr double kSeqAugmentThreshold = 8.0;

// Synthetic join-cost task. The cost model is deterministic; queries censor
// at timeout_tau, mirroring timed-out executions.
struct QueryTaskSpec {
    TaskId id;
    int n_relations = 0;
    std::vector<double> cardinalities;             // per relation, in [1e2, 1e6]
    std::vector<std::vector<double>> selectivity;  // symmetric; 1.0 off the predicate graph
    double timeout_tau = 0.0;
    double noise_sigma = 0.0;  // multiplicative noise hook, off by default
    std::uint64_t gen_seed = 0;

    // Canonical serialization of {cards, n, sel}; regenerable from the fields
    // and the only task description policies may see.
    std::string context_text() const;
};

// Synthetic sequence-fitness task. motif_weights are hidden: only eval_seq may
// read them; they never appear in the context.
struct SeqTaskSpec {
    TaskId id;
    std::string seed;
    std::vector<std::array<double, kAminoAlphabetSize>> motif_weights;
    double seed_score = kSeedScore;
    std::uint64_t gen_seed = 0;

    std::string context_text() const { return seed; }
};

using TaskSpec = std::variant<QueryTaskSpec, SeqTaskSpec>;

const TaskId& task_id(const TaskSpec& spec);
Domain task_domain(const TaskSpec& spec);
TaskContext task_context(const TaskSpec& spec);
int latent_dim(const TaskSpec& spec);

// Oracle-call accounting. Every evaluation charges exactly one call,
// censored and constraint-violating ones included.
struct Budget {
    int limit = 0;
    int used = 0;

    void charge();  // throws BudgetExhausted when used == limit
    int remaining() const { return limit - used; }
};

// Deterministic task generators.
QueryTaskSpec gen_query_task(std::uint64_t seed, int n_relations);
SeqTaskSpec gen_seq_task(std::uint64_t seed, int min_len = 15, int max_len = 30);

// Greedy smallest-intermediate plan (hash joins throughout); anchors the
// censoring threshold: timeout_tau = kTimeoutFactor * its cost.
JoinPlan heuristic_plan(const QueryTaskSpec& spec);

// Left-deep cost model without censoring or budget accounting.
double plan_cost(const QueryTaskSpec& spec, const JoinPlan& plan);

Outcome eval_plan(const QueryTaskSpec& spec, const JoinPlan& plan, Budget& budget);
Outcome eval_seq(const SeqTaskSpec& spec, const EditedSeq& cand, Budget& budget);
Outcome eval_candidate(const TaskSpec& spec, const Candidate& cand, Budget& budget);

// Sequence score without budget accounting (used by exhaustive test oracles).
double seq_score(const SeqTaskSpec& spec, const std::string& seq);

// Value substituted for rejected few-shot samples: tau for query tasks, the
// seed score for sequence tasks.
double fallback_value(const TaskSpec& spec);

// Null-policy initialization: uniform random plans / random mutations at the
// similarity-constraint boundary.
std::vector<Candidate> fallback_candidates(const TaskSpec& spec, int count, Rng& rng);

// Self-augmentation acceptance threshold: the heuristic plan cost
// (timeout_tau / kTimeoutFactor) for queries, kSeqAugmentThreshold for
// sequences. A sample is kept when its exact value is strictly below this.
double self_augment_threshold(const TaskSpec& spec);

// Codec bridges between structured candidates and the task's latent space.
Candidate decode_candidate(const TaskSpec& spec, const LatentPoint& z);
LatentPoint encode_candidate(const Candidate& cand);

// One draw from the null-policy initializer.
Candidate draw_fallback_candidate(const TaskSpec& spec, Rng& rng);

}  // namespace bolt
