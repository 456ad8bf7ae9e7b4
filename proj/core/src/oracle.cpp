// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#include "bolt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bolt/errors.hpp"
#include "json_detail.hpp"

namespace bolt {

namespace {

bool valid_plan_for(const QueryTaskSpec& spec, const JoinPlan& plan) {
    const int n = spec.n_relations;
    if (plan.n_relations() != n || plan.ops.size() != static_cast<std::size_t>(n - 1)) {
        return false;
    }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : plan.order) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

std::uint64_t plan_hash(const JoinPlan& plan) {
    std::uint64_t h = 0x9ae16a3b2f90404fULL;
    for (int v : plan.order) h = mix_seed(h, static_cast<std::uint64_t>(v) + 1);
    for (JoinOp op : plan.ops) h = mix_seed(h, static_cast<std::uint64_t>(op) + 17);
    return h;
}

}  // namespace

void Budget::charge() {
    if (used >= limit) {
        throw BudgetExhausted("oracle budget exhausted (limit " + std::to_string(limit) + ")");
    }
    ++used;
}

const TaskId& task_id(const TaskSpec& spec) {
    return std::visit([](const auto& s) -> const TaskId& { return s.id; }, spec);
}

Domain task_domain(const TaskSpec& spec) {
    return std::holds_alternative<QueryTaskSpec>(spec) ? Domain::Query : Domain::Sequence;
}

TaskContext task_context(const TaskSpec& spec) {
    return TaskContext{std::visit([](const auto& s) { return s.context_text(); }, spec)};
}

int latent_dim(const TaskSpec& spec) {
    if (const auto* q = std::get_if<QueryTaskSpec>(&spec)) return 2 * q->n_relations - 1;
    return static_cast<int>(std::get<SeqTaskSpec>(spec).seed.size());
}

std::string QueryTaskSpec::context_text() const {
    detail::json j;
    j["cards"] = cardinalities;
    j["n"] = n_relations;
    j["sel"] = selectivity;
    return detail::canonical_dump(j);
}

JoinPlan heuristic_plan(const QueryTaskSpec& spec) {
    const int n = spec.n_relations;
    JoinPlan plan;
    plan.ops.assign(static_cast<std::size_t>(n - 1), JoinOp::HashJoin);
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    // start from the smallest relation, then greedily keep the intermediate small
    int start = 0;
    for (int r = 1; r < n; ++r) {
        if (spec.cardinalities[static_cast<std::size_t>(r)] <
            spec.cardinalities[static_cast<std::size_t>(start)]) {
            start = r;
        }
    }
    plan.order.push_back(start);
    used[static_cast<std::size_t>(start)] = true;
    double acc_card = spec.cardinalities[static_cast<std::size_t>(start)];
    for (int step = 1; step < n; ++step) {
        int best_r = -1;
        double best_out = 0.0;
        for (int r = 0; r < n; ++r) {
            if (used[static_cast<std::size_t>(r)]) continue;
            double selp = 1.0;
            for (int s : plan.order) {
                selp *= spec.selectivity[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)];
            }
            const double out = acc_card * spec.cardinalities[static_cast<std::size_t>(r)] * selp;
            if (best_r < 0 || out < best_out) {
                best_r = r;
                best_out = out;
            }
        }
        plan.order.push_back(best_r);
        used[static_cast<std::size_t>(best_r)] = true;
        acc_card = best_out;
    }
    return plan;
}

double plan_cost(const QueryTaskSpec& spec, const JoinPlan& plan) {
    if (!valid_plan_for(spec, plan)) {
        throw InvalidPlan("plan_cost: plan does not match spec.n_relations");
    }
    double acc_card = spec.cardinalities[static_cast<std::size_t>(plan.order[0])];
    double total = 0.0;
    for (std::size_t k = 1; k < plan.order.size(); ++k) {
        const int r = plan.order[k];
        double selp = 1.0;
        for (std::size_t s = 0; s < k; ++s) {
            selp *= spec.selectivity[static_cast<std::size_t>(r)]
                                    [static_cast<std::size_t>(plan.order[s])];
        }
        const double card_r = spec.cardinalities[static_cast<std::size_t>(r)];
        const double out = acc_card * card_r * selp;
        const double mult =
            plan.ops[k - 1] == JoinOp::HashJoin ? 1.0 : 1.0 + std::log10(card_r);
        total += mult * out;
        acc_card = out;
    }
    if (spec.noise_sigma > 0.0) {
        Rng noise(mix_seed(spec.gen_seed, plan_hash(plan)));
        total *= std::exp(spec.noise_sigma * noise.normal());
    }
    return total;
}

QueryTaskSpec gen_query_task(std::uint64_t seed, int n_relations) {
    if (n_relations < 4 || n_relations > 12) {
        throw ConfigError("gen_query_task: n_relations must be in [4, 12]");
    }
    const int n = n_relations;
    for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        Rng rng(mix_seed(seed, 0x9c7a, attempt));
        QueryTaskSpec spec;
        spec.n_relations = n;
        spec.gen_seed = seed;
        for (int i = 0; i < n; ++i) spec.cardinalities.push_back(rng.log_uniform(1e2, 1e6));
        spec.selectivity.assign(static_cast<std::size_t>(n),
                                std::vector<double>(static_cast<std::size_t>(n), 1.0));
        auto add_edge = [&](int a, int b) {
            const double sel = rng.log_uniform(1e-4, 1.0);
            spec.selectivity[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = sel;
            spec.selectivity[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = sel;
        };
        // random spanning tree keeps the predicate graph connected
        for (int i = 1; i < n; ++i) add_edge(i, static_cast<int>(rng.uniform_index(i)));
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (spec.selectivity[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                        1.0 &&
                    rng.uniform() < 0.3) {
                    add_edge(i, j);
                }
            }
        }
        spec.timeout_tau = kTimeoutFactor * plan_cost(spec, heuristic_plan(spec));

        // sanity: the landscape must not be flat
        std::set<double> costs{plan_cost(spec, heuristic_plan(spec))};
        for (int s = 0; s < 8; ++s) {
            LatentPoint z;
            for (int j = 0; j < 2 * n - 1; ++j) z.coords.push_back(rng.uniform());
            costs.insert(plan_cost(spec, decode_plan(z, n)));
        }
        if (costs.size() >= 2) return spec;
    }
    throw DegenerateData("gen_query_task: could not generate a non-degenerate landscape");
}

SeqTaskSpec gen_seq_task(std::uint64_t seed, int min_len, int max_len) {
    if (min_len < 1 || max_len < min_len) {
        throw ConfigError("gen_seq_task: bad length range");
    }
    Rng rng(mix_seed(seed, 0x5e91));
    SeqTaskSpec spec;
    spec.gen_seed = seed;
    const int len =
        min_len + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(max_len - min_len + 1)));
    spec.seed.reserve(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) {
        spec.seed.push_back(kAminoAlphabet[rng.uniform_index(kAminoAlphabetSize)]);
    }
    spec.motif_weights.resize(static_cast<std::size_t>(len));
    for (auto& row : spec.motif_weights) {
        for (double& w : row) w = rng.normal();
    }
    spec.seed_score = kSeedScore;
    return spec;
}

double seq_score(const SeqTaskSpec& spec, const std::string& seq) {
    if (seq.size() != spec.seed.size()) {
        throw ConstraintViolated("seq_score: length must equal the seed length");
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const int cur = amino_index(seq[i]);
        const int ref = amino_index(spec.seed[i]);
        if (cur < 0 || ref < 0) throw ConstraintViolated("seq_score: non-alphabet letter");
        delta += spec.motif_weights[i][static_cast<std::size_t>(cur)] -
                 spec.motif_weights[i][static_cast<std::size_t>(ref)];
    }
    return spec.seed_score + delta;
}

Outcome eval_plan(const QueryTaskSpec& spec, const JoinPlan& plan, Budget& budget) {
    if (!valid_plan_for(spec, plan)) {
        throw InvalidPlan("eval_plan: plan does not match spec.n_relations");
    }
    budget.charge();
    const double cost = plan_cost(spec, plan);
    if (cost > spec.timeout_tau) return Censored{spec.timeout_tau};
    return Exact{cost};
}

Outcome eval_seq(const SeqTaskSpec& spec, const EditedSeq& cand, Budget& budget) {
    budget.charge();  // constraint violations count as wasted evaluations
    if (cand.seq.size() != spec.seed.size()) {
        throw ConstraintViolated("eval_seq: length must equal the seed length");
    }
    for (char c : cand.seq) {
        if (!is_amino_letter(c)) {
            throw ConstraintViolated("eval_seq: non-alphabet letter in candidate");
        }
    }
    if (similarity(spec.seed, cand.seq) < kSimilarityThreshold) {
        throw ConstraintViolated("eval_seq: similarity below threshold");
    }
    return Exact{seq_score(spec, cand.seq)};
}

Outcome eval_candidate(const TaskSpec& spec, const Candidate& cand, Budget& budget) {
    if (const auto* q = std::get_if<QueryTaskSpec>(&spec)) {
        const auto* plan = std::get_if<JoinPlan>(&cand);
        if (!plan) throw InvalidPlan("eval_candidate: expected a join plan");
        return eval_plan(*q, *plan, budget);
    }
    const auto& s = std::get<SeqTaskSpec>(spec);
    const auto* seq = std::get_if<EditedSeq>(&cand);
    if (!seq) throw ConstraintViolated("eval_candidate: expected a sequence");
    return eval_seq(s, *seq, budget);
}

double fallback_value(const TaskSpec& spec) {
    if (const auto* q = std::get_if<QueryTaskSpec>(&spec)) return q->timeout_tau;
    return std::get<SeqTaskSpec>(spec).seed_score;
}

double self_augment_threshold(const TaskSpec& spec) {
    if (const auto* q = std::get_if<QueryTaskSpec>(&spec)) {
        return q->timeout_tau / kTimeoutFactor;
    }
    return kSeqAugmentThreshold;
}

Candidate decode_candidate(const TaskSpec& spec, const LatentPoint& z) {
    if (const auto* q = std::get_if<QueryTaskSpec>(&spec)) {
        return decode_plan(z, q->n_relations);
    }
    const auto& s = std::get<SeqTaskSpec>(spec);
    return decode_seq(z, s.seed, s.id);
}

LatentPoint encode_candidate(const Candidate& cand) {
    if (const auto* plan = std::get_if<JoinPlan>(&cand)) return encode_plan(*plan);
    return encode_seq(std::get<EditedSeq>(cand).seq);
}

Candidate draw_fallback_candidate(const TaskSpec& spec, Rng& rng) {
    if (const auto* q = std::get_if<QueryTaskSpec>(&spec)) {
        LatentPoint z;
        const int d = 2 * q->n_relations - 1;
        z.coords.reserve(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) z.coords.push_back(rng.uniform());
        return decode_plan(z, q->n_relations);
    }
    // random mutation at the constraint boundary: floor(0.25 * len) distinct
    // substitutions keeps similarity >= 0.75
    const auto& s = std::get<SeqTaskSpec>(spec);
    const int len = static_cast<int>(s.seed.size());
    const int edits = len / 4;
    std::string seq = s.seed;
    std::vector<int> positions(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) positions[static_cast<std::size_t>(i)] = i;
    for (int e = 0; e < edits; ++e) {
        const int pick =
            e + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(len - e)));
        std::swap(positions[static_cast<std::size_t>(e)], positions[static_cast<std::size_t>(pick)]);
        const int pos = positions[static_cast<std::size_t>(e)];
        const int cur = amino_index(s.seed[static_cast<std::size_t>(pos)]);
        int repl = static_cast<int>(rng.uniform_index(kAminoAlphabetSize - 1));
        if (repl >= cur) ++repl;
        seq[static_cast<std::size_t>(pos)] = kAminoAlphabet[repl];
    }
    return EditedSeq{seq, s.id};
}

std::vector<Candidate> fallback_candidates(const TaskSpec& spec, int count, Rng& rng) {
    if (count < 1) throw ConfigError("fallback_candidates: count must be >= 1");
    std::vector<Candidate> out;
    std::set<std::string> seen;
    int attempts = 0;
    const int max_attempts = count * 20;
    while (static_cast<int>(out.size()) < count) {
        Candidate c = draw_fallback_candidate(spec, rng);
        ++attempts;
        if (seen.insert(candidate_text(c)).second || attempts > max_attempts) {
            out.push_back(std::move(c));
        }
    }
    return out;
}

}  // namespace bolt
