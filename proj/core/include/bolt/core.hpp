// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bolt/encode.hpp"
#include "bolt/types.hpp"

namespace bolt {

using Candidate = std::variant<JoinPlan, EditedSeq>;

struct Exact {
    double value = 0.0;
    bool operator==(const Exact&) const = default;
};

// Right-censored result: we only learned that the true value is >= tau.
struct Censored {
    double tau = 0.0;
    bool operator==(const Censored&) const = default;
};

using Outcome = std::variant<Exact, Censored>;

inline bool is_exact(const Outcome& o) { return std::holds_alternative<Exact>(o); }

struct Observation {
    Candidate candidate;
    Outcome outcome;
    int call_index = 0;  // 1-based, strictly increasing within a trajectory
    bool operator==(const Observation&) const = default;
};

// Ordered oracle-call log for one task.
struct Trajectory {
    TaskId task;
    std::uint64_t rng_seed = 0;
    std::vector<Observation> observations;
    bool operator==(const Trajectory&) const = default;
};

// The k lowest exact values, ascending, ties broken by earlier call index.
// Censored observations are excluded. Fewer than k results when the
// trajectory holds fewer exact observations.
std::vector<std::pair<Candidate, double>> top_k(const Trajectory& traj, int k);

// Minimum over exact outcomes; nullopt when none exists.
std::optional<double> incumbent(const Trajectory& traj);

// Running minimum over exact outcomes at each call index; censored calls
// carry the previous value forward (nullopt until the first exact outcome).
std::vector<std::pair<int, std::optional<double>>> best_so_far_curve(const Trajectory& traj);

// --- Canonical serialization -------------------------------------------------
// One JSON object per observation:
//   {"call":N,"candidate":{...},"outcome":{"kind":"exact","value":V}}
//   {"call":N,"candidate":{...},"outcome":{"kind":"censored","tau":T}}
// Keys sorted, floats printed with 17 significant digits, so the byte form is
// stable and hashable.

std::string candidate_text(const Candidate& c);  // policy wire text
Domain candidate_domain(const Candidate& c);

std::string observation_to_jsonl(const Observation& obs);
Observation observation_from_jsonl(const std::string& line);

// Newline-terminated concatenation of observation lines.
std::string trajectory_to_jsonl(const Trajectory& traj);
std::vector<Observation> observations_from_jsonl(const std::string& text);

}  // namespace bolt
