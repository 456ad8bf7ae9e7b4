// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bolt/types.hpp"

namespace bolt {

enum class JoinOp : int { HashJoin = 0, NestedLoop = 1 };

// Left-deep join order plus one operator per join step.
struct JoinPlan {
    std::vector<int> order;   // permutation of 0..n-1
    std::vector<JoinOp> ops;  // size n-1
    bool operator==(const JoinPlan&) const = default;
    int n_relations() const { return static_cast<int>(order.size()); }
};

// A substitution-only edit of a seed sequence; same length as the seed.
struct EditedSeq {
    std::string seq;
    TaskId seed_id;
    bool operator==(const EditedSeq&) const = default;
};

// Continuous point BO operates on. Every coordinate lives in [0,1]; the
// dimension is n + (n-1) for plans and the seed length for sequences.
struct LatentPoint {
    std::vector<double> coords;
    bool operator==(const LatentPoint&) const = default;
    int dim() const { return static_cast<int>(coords.size()); }
};

inline constexpr char kAminoAlphabet[] = "ACDEFGHIKLMNPQRSTVWY";
inline constexpr int kAminoAlphabetSize = 20;
inline constexpr double kSimilarityThreshold = 0.75;

bool is_amino_letter(char c);
int amino_index(char c);  // -1 when not in the alphabet

// Random-key decoding: order = argsort of the first n coordinates (ascending,
// ties by index), op i = HashJoin iff coordinate n+i < 0.5. Total: any point
// in [0,1]^(2n-1) yields a valid plan.
JoinPlan decode_plan(const LatentPoint& z, int n_relations);

// Deterministic right inverse of decode_plan: the key for relation r is
// (position of r in the order + 0.5) / n, op coordinates are 0.25 / 0.75,
// so decode_plan(encode_plan(p), n) == p.
LatentPoint encode_plan(const JoinPlan& plan);

// Per-position decoding: position i takes alphabet letter floor(z_i * 20)
// clamped to 19, then repair() enforces the similarity constraint.
EditedSeq decode_seq(const LatentPoint& z, const std::string& seed, const TaskId& seed_id,
                     double threshold = kSimilarityThreshold);

// Right inverse of the per-position map: z_i = (letter index + 0.5) / 20.
LatentPoint encode_seq(const std::string& seq);

// Standard edit distance (insert/delete/substitute, unit costs).
int levenshtein(const std::string& a, const std::string& b);

// 1 - levenshtein(seed, cand) / len(seed). May go negative for very distant
// strings. Throws EmptySeed when the seed is empty.
double similarity(const std::string& seed, const std::string& cand);

// Reverts substituted positions back to the seed letter, in ascending
// position order, until similarity(seed, out) >= threshold.
std::string repair(const std::string& seed, const std::string& cand, double threshold);

// Plan text format used on the policy wire:
//   "o_0 ... o_{n-1} | b_0 ... b_{n-2}"  with b_i in {0,1} (0 = hash join).
std::string format_plan(const JoinPlan& plan);

// Strict parse of the plan text format; nullopt on any structural problem.
std::optional<JoinPlan> parse_plan(const std::string& text, int n_relations);

}  // namespace bolt
