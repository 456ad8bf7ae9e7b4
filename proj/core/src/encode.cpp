// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#include "bolt/encode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bolt/errors.hpp"

namespace bolt {

namespace {

bool is_permutation_of_n(const std::vector<int>& order) {
    const int n = static_cast<int>(order.size());
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : order) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

}  // namespace

bool is_amino_letter(char c) { return amino_index(c) >= 0; }

int amino_index(char c) {
    for (int i = 0; i < kAminoAlphabetSize; ++i) {
        if (kAminoAlphabet[i] == c) return i;
    }
    return -1;
}

JoinPlan decode_plan(const LatentPoint& z, int n_relations) {
    if (n_relations < 1) throw DimensionMismatch("decode_plan: n_relations must be >= 1");
    if (z.dim() != 2 * n_relations - 1) {
        throw DimensionMismatch("decode_plan: expected dimension " +
                                std::to_string(2 * n_relations - 1) + ", got " +
                                std::to_string(z.dim()));
    }
    JoinPlan plan;
    plan.order.resize(static_cast<std::size_t>(n_relations));
    std::iota(plan.order.begin(), plan.order.end(), 0);
    // stable sort keeps index order on equal keys
    std::stable_sort(plan.order.begin(), plan.order.end(), [&z](int a, int b) {
        return z.coords[static_cast<std::size_t>(a)] < z.coords[static_cast<std::size_t>(b)];
    });
    plan.ops.reserve(static_cast<std::size_t>(n_relations - 1));
    for (int i = 0; i < n_relations - 1; ++i) {
        plan.ops.push_back(z.coords[static_cast<std::size_t>(n_relations + i)] < 0.5
                               ? JoinOp::HashJoin
                               : JoinOp::NestedLoop);
    }
    return plan;
}

LatentPoint encode_plan(const JoinPlan& plan) {
    const int n = plan.n_relations();
    if (n < 1 || !is_permutation_of_n(plan.order) ||
        plan.ops.size() != static_cast<std::size_t>(n - 1)) {
        throw InvalidPlan("encode_plan: not a structurally valid plan");
    }
    LatentPoint z;
    z.coords.resize(static_cast<std::size_t>(2 * n - 1));
    for (int pos = 0; pos < n; ++pos) {
        z.coords[static_cast<std::size_t>(plan.order[static_cast<std::size_t>(pos)])] =
            (pos + 0.5) / n;
    }
    for (int i = 0; i < n - 1; ++i) {
        z.coords[static_cast<std::size_t>(n + i)] =
            plan.ops[static_cast<std::size_t>(i)] == JoinOp::HashJoin ? 0.25 : 0.75;
    }
    return z;
}

EditedSeq decode_seq(const LatentPoint& z, const std::string& seed, const TaskId& seed_id,
                     double threshold) {
    if (z.dim() != static_cast<int>(seed.size())) {
        throw DimensionMismatch("decode_seq: expected dimension " +
                                std::to_string(seed.size()) + ", got " + std::to_string(z.dim()));
    }
    std::string raw(seed.size(), 'A');
    for (std::size_t i = 0; i < seed.size(); ++i) {
        int idx = static_cast<int>(std::floor(z.coords[i] * kAminoAlphabetSize));
        idx = std::clamp(idx, 0, kAminoAlphabetSize - 1);
        raw[i] = kAminoAlphabet[idx];
    }
    return EditedSeq{repair(seed, raw, threshold), seed_id};
}

LatentPoint encode_seq(const std::string& seq) {
    LatentPoint z;
    z.coords.reserve(seq.size());
    for (char c : seq) {
        const int idx = amino_index(c);
        if (idx < 0) throw UnknownToken(std::string("encode_seq: not an amino letter: ") + c);
        z.coords.push_back((idx + 0.5) / kAminoAlphabetSize);
    }
    return z;
}

int levenshtein(const std::string& a, const std::string& b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n == 0) return static_cast<int>(m);
    if (m == 0) return static_cast<int>(n);
    std::vector<int> prev(m + 1);
    std::vector<int> cur(m + 1);
    std::iota(prev.begin(), prev.end(), 0);
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= m; ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double similarity(const std::string& seed, const std::string& cand) {
    if (seed.empty()) throw EmptySeed("similarity: seed must be non-empty");
    return 1.0 - static_cast<double>(levenshtein(seed, cand)) / static_cast<double>(seed.size());
}

std::string repair(const std::string& seed, const std::string& cand, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw ConfigError("repair: threshold must be in (0, 1]");
    }
    if (cand.size() != seed.size()) {
        throw DimensionMismatch("repair: candidate length must equal seed length");
    }
    std::string out = cand;
    if (similarity(seed, out) >= threshold) return out;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] == seed[i]) continue;
        out[i] = seed[i];
        if (similarity(seed, out) >= threshold) return out;
    }
    return out;  // out == seed
}

std::string format_plan(const JoinPlan& plan) {
    std::ostringstream os;
    for (std::size_t i = 0; i < plan.order.size(); ++i) {
        if (i) os << ' ';
        os << plan.order[i];
    }
    os << " |";
    for (JoinOp op : plan.ops) os << ' ' << (op == JoinOp::HashJoin ? 0 : 1);
    return os.str();
}

std::optional<JoinPlan> parse_plan(const std::string& text, int n_relations) {
    if (n_relations < 1) return std::nullopt;
    std::istringstream in(text);
    std::vector<std::string> fields;
    std::string tok;
    while (in >> tok) fields.push_back(tok);
    // n order fields, "|", n-1 op bits
    if (fields.size() != static_cast<std::size_t>(2 * n_relations)) return std::nullopt;
    if (fields[static_cast<std::size_t>(n_relations)] != "|") return std::nullopt;
    JoinPlan plan;
    auto parse_int = [](const std::string& s, int& out) {
        if (s.empty()) return false;
        for (char c : s) {
            if (c < '0' || c > '9') return false;
        }
        if (s.size() > 4) return false;
        out = std::stoi(s);
        return true;
    };
    for (int i = 0; i < n_relations; ++i) {
        int v = 0;
        if (!parse_int(fields[static_cast<std::size_t>(i)], v)) return std::nullopt;
        plan.order.push_back(v);
    }
    if (!is_permutation_of_n(plan.order)) return std::nullopt;
    for (int i = 0; i < n_relations - 1; ++i) {
        int v = 0;
        if (!parse_int(fields[static_cast<std::size_t>(n_relations + 1 + i)], v)) {
            return std::nullopt;
        }
        if (v != 0 && v != 1) return std::nullopt;
        plan.ops.push_back(static_cast<JoinOp>(v));
    }
    return plan;
}

}  // namespace bolt
