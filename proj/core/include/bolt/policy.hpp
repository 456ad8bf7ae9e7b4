// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bolt/oracle.hpp"
#include "bolt/rng.hpp"

namespace bolt {

// System prompt is shared across all tasks of a domain; the user prompt is
// the task context.
struct PolicyPrompt {
    std::string system;
    std::string user;
    bool operator==(const PolicyPrompt&) const = default;
};

const std::string& system_prompt(Domain d);
PolicyPrompt build_prompt(Domain d, const TaskContext& context);

// One training example: (system, user = context, assistant = solution text).
struct FinetuneRecord {
    Domain domain = Domain::Query;
    std::string system;
    std::string user;
    std::string assistant;
    bool operator==(const FinetuneRecord&) const = default;
};

// Context-bucketed smoothed n-gram over domain tokens. States key on
// (context bucket, position, token history); bucket 0 is a global backoff
// layer that accumulates every record and answers for unseen buckets.
// Immutable after training.
struct NGramPolicy {
    Domain domain = Domain::Query;
    int order = 3;  // history length = order - 1
    double alpha = 0.5;
    // counts[bucket][packed state] -> token -> count
    std::map<std::uint64_t, std::map<std::uint64_t, std::map<int, std::int64_t>>> counts;

    bool trained() const { return !counts.empty(); }
    int vocab_size() const;

    std::string to_json() const;  // canonical bytes, stable for hashing
    static NGramPolicy from_json(const std::string& text);
};

NGramPolicy train_ngram(const std::vector<FinetuneRecord>& records, int epochs = 1,
                        int order = 3, double alpha = 0.5);

// Autoregressive sampling. At temperature T probabilities are proportional to
// p^(1/T); T = 0 takes the argmax at every step, ties broken by token order.
std::string sample(const NGramPolicy& policy, const TaskContext& context, double temperature,
                   Rng& rng);

// Negative log-likelihood of the solution tokens given the context (natural
// log, end token excluded). Throws UnknownToken on untokenizable input.
double nll(const NGramPolicy& policy, const TaskContext& context, const std::string& solution);

struct SanitizeResult {
    std::optional<Candidate> candidate;
    std::string reject_reason;  // non-empty iff rejected
    bool accepted() const { return candidate.has_value(); }
};

// Strips characters outside the domain's token set, parses the wire format,
// and validates against the task (permutation check / length check + repair).
// Never throws; rejections carry a reason.
SanitizeResult sanitize(const std::string& raw, const TaskSpec& task);

struct ProposeResult {
    std::vector<Candidate> candidates;
    int pad_count = 0;  // how many came from the fallback initializer
};

struct RemoteLLMConfig;

// A nullable reference to whichever backend drives proposals. Both null is
// the null-policy baseline.
struct PolicyRef {
    const NGramPolicy* ngram = nullptr;
    const RemoteLLMConfig* remote = nullptr;
    bool null_policy() const { return ngram == nullptr && remote == nullptr; }
};

// Draws up to 3n raw samples, sanitizes, returns the first n accepted
// (deduplicated); shortfall is padded from the domain fallback initializer
// with the pad count recorded. A null policy yields fallback candidates only.
ProposeResult propose(PolicyRef policy, const TaskSpec& task, int count, double temperature,
                      Rng& rng);

inline ProposeResult propose(const NGramPolicy* policy, const TaskSpec& task, int count,
                             double temperature, Rng& rng) {
    return propose(PolicyRef{policy, nullptr}, task, count, temperature, rng);
}

// --- Fine-tune dataset wire format -------------------------------------------
// One JSON object per line:
// {"messages":[{"role":"system",...},{"role":"user",...},{"role":"assistant",...}]}

std::string finetune_record_to_jsonl(const FinetuneRecord& rec);
FinetuneRecord finetune_record_from_jsonl(const std::string& line, Domain domain);
std::string finetune_dataset_to_jsonl(const std::vector<FinetuneRecord>& records);
std::vector<FinetuneRecord> finetune_dataset_from_jsonl(const std::string& text, Domain domain);

// Validates the messages schema line by line; returns false and sets `error`
// on the first violation.
bool validate_finetune_jsonl(const std::string& text, std::string* error);

}  // namespace bolt
