// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#include "bolt/policy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "bolt/errors.hpp"
#include "bolt/remote.hpp"
#include "bolt/store.hpp"
#include "json_detail.hpp"

namespace bolt {

namespace {

// Query vocabulary: ids 0..11 are cardinality-rank tokens (doubling as the
// 0/1 operator bits), 12 is the "|" separator, 13 ends generation.
constexpr int kMaxRelations = 12;
constexpr int kQuerySep = kMaxRelations;
constexpr int kQueryEnd = kMaxRelations + 1;
constexpr int kQueryVocab = kMaxRelations + 2;

// Sequence vocabulary: 0 copies the seed letter at that position, 1..20 are
// the amino letters, 21 ends generation.
constexpr int kSeqCopy = 0;
constexpr int kSeqEnd = kAminoAlphabetSize + 1;
constexpr int kSeqVocab = kAminoAlphabetSize + 2;

constexpr int kBos = 0xFF;          // history sentinel, never sampled
constexpr int kMaxGenTokens = 48;   // hard stop for runaway generations
constexpr int kMaxStatePos = 0xFE;  // positions clamp into one byte

constexpr std::uint64_t kGlobalBucket = 0;

int end_token(Domain d) { return d == Domain::Query ? kQueryEnd : kSeqEnd; }
int vocab_of(Domain d) { return d == Domain::Query ? kQueryVocab : kSeqVocab; }

// Cardinality ranking parsed out of a query context. Plans are tokenized in
// rank space (0 = smallest relation) so the learned patterns transfer across
// tasks; the mapping back to relation indices happens at detokenize time.
struct QueryContextInfo {
    bool valid = false;
    int n = 0;
    std::vector<int> rank_of;           // relation -> cardinality rank
    std::vector<int> relation_at_rank;  // rank -> relation
    std::vector<int> top3;              // largest-cardinality relations, descending
};

QueryContextInfo parse_query_context(const std::string& text) {
    QueryContextInfo info;
    detail::json j;
    try {
        j = detail::json::parse(text);
        info.n = j.at("n").get<int>();
        const auto cards = j.at("cards").get<std::vector<double>>();
        if (info.n < 1 || cards.size() != static_cast<std::size_t>(info.n)) return info;
        std::vector<int> by_card(cards.size());
        for (std::size_t i = 0; i < cards.size(); ++i) by_card[i] = static_cast<int>(i);
        std::stable_sort(by_card.begin(), by_card.end(),
                         [&cards](int a, int b) { return cards[static_cast<std::size_t>(a)] <
                                                          cards[static_cast<std::size_t>(b)]; });
        info.relation_at_rank = by_card;
        info.rank_of.assign(cards.size(), 0);
        for (std::size_t r = 0; r < by_card.size(); ++r) {
            info.rank_of[static_cast<std::size_t>(by_card[r])] = static_cast<int>(r);
        }
        for (int k = 0; k < 3 && k < info.n; ++k) {
            info.top3.push_back(by_card[static_cast<std::size_t>(info.n - 1 - k)]);
        }
        info.valid = true;
    } catch (const std::exception&) {
        info.valid = false;
    }
    return info;
}

std::uint64_t bucket_of(Domain d, const std::string& context) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    if (d == Domain::Query) {
        const QueryContextInfo info = parse_query_context(context);
        if (!info.valid) return kGlobalBucket;
        h = mix_seed(h, static_cast<std::uint64_t>(info.n));
        for (int r : info.top3) h = mix_seed(h, static_cast<std::uint64_t>(r) + 3);
    } else {
        // multiset of 2-mers of the seed
        std::vector<std::string> grams;
        for (std::size_t i = 0; i + 1 < context.size(); ++i) grams.push_back(context.substr(i, 2));
        std::sort(grams.begin(), grams.end());
        for (const auto& g : grams) {
            for (char c : g) h = mix_seed(h, static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
        }
    }
    return (h << 1) | 1;  // bucket 0 stays reserved for the global layer
}

std::uint64_t pack_state(int pos, const std::vector<int>& hist) {
    std::uint64_t key = static_cast<std::uint64_t>(std::min(pos, kMaxStatePos));
    for (int h : hist) key = (key << 8) | static_cast<std::uint64_t>(h & 0xFF);
    return key;
}

// Tokenization. Query solutions are mapped through the context's cardinality
// ranking; sequence solutions are mapped to copy/substitute tokens against
// the context seed.
std::vector<int> tokenize_solution(Domain d, const std::string& context,
                                   const std::string& solution) {
    std::vector<int> out;
    if (d == Domain::Query) {
        const QueryContextInfo info = parse_query_context(context);
        std::istringstream in(solution);
        std::string field;
        bool after_sep = false;
        while (in >> field) {
            if (field == "|") {
                if (after_sep) throw UnknownToken("plan text has two separators");
                after_sep = true;
                out.push_back(kQuerySep);
                continue;
            }
            int v = -1;
            try {
                std::size_t used = 0;
                v = std::stoi(field, &used);
                if (used != field.size()) v = -1;
            } catch (const std::exception&) {
                v = -1;
            }
            if (v < 0) throw UnknownToken("plan token is not an integer: " + field);
            if (!after_sep) {
                const int rank = (info.valid && v < info.n)
                                     ? info.rank_of[static_cast<std::size_t>(v)]
                                     : v;
                if (rank < 0 || rank >= kMaxRelations) {
                    throw UnknownToken("relation index out of range: " + field);
                }
                out.push_back(rank);
            } else {
                if (v != 0 && v != 1) throw UnknownToken("operator bit out of range: " + field);
                out.push_back(v);
            }
        }
    } else {
        for (std::size_t i = 0; i < solution.size(); ++i) {
            const int idx = amino_index(solution[i]);
            if (idx < 0) {
                throw UnknownToken(std::string("not an amino letter: ") + solution[i]);
            }
            if (i < context.size() && solution[i] == context[i]) {
                out.push_back(kSeqCopy);
            } else {
                out.push_back(idx + 1);
            }
        }
    }
    return out;
}

std::string detokenize(Domain d, const std::string& context, const std::vector<int>& tokens) {
    if (d == Domain::Query) {
        const QueryContextInfo info = parse_query_context(context);
        std::ostringstream os;
        bool after_sep = false;
        bool first = true;
        for (int t : tokens) {
            if (!first) os << ' ';
            first = false;
            if (t == kQuerySep) {
                os << '|';
                after_sep = true;
            } else if (!after_sep) {
                const int rel = (info.valid && t < info.n)
                                    ? info.relation_at_rank[static_cast<std::size_t>(t)]
                                    : t;
                os << rel;
            } else {
                os << t;
            }
        }
        return os.str();
    }
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const int t = tokens[i];
        if (t == kSeqCopy) {
            if (i < context.size()) out.push_back(context[i]);
        } else if (t >= 1 && t <= kAminoAlphabetSize) {
            out.push_back(kAminoAlphabet[t - 1]);
        }
    }
    return out;
}

const std::map<int, std::int64_t>* find_state(const NGramPolicy& p, std::uint64_t bucket,
                                              std::uint64_t state) {
    const auto b = p.counts.find(bucket);
    if (b == p.counts.end()) return nullptr;
    const auto s = b->second.find(state);
    if (s == b->second.end()) return nullptr;
    return &s->second;
}

// Smoothed distribution with stupid backoff: the context bucket answers when
// it has any mass for this state, otherwise the global layer, otherwise the
// smoothing prior alone (uniform).
std::vector<double> state_probs(const NGramPolicy& p, std::uint64_t bucket, std::uint64_t state) {
    const int V = p.vocab_size();
    const std::map<int, std::int64_t>* m = find_state(p, bucket, state);
    if (!m && bucket != kGlobalBucket) m = find_state(p, kGlobalBucket, state);
    std::vector<double> probs(static_cast<std::size_t>(V), 0.0);
    double total = 0.0;
    if (m) {
        for (const auto& [tok, cnt] : *m) total += static_cast<double>(cnt);
    }
    const double denom = total + p.alpha * V;
    for (int t = 0; t < V; ++t) {
        probs[static_cast<std::size_t>(t)] = p.alpha / denom;
    }
    if (m) {
        for (const auto& [tok, cnt] : *m) {
            if (tok >= 0 && tok < V) {
                probs[static_cast<std::size_t>(tok)] =
                    (static_cast<double>(cnt) + p.alpha) / denom;
            }
        }
    }
    return probs;
}

void push_history(std::vector<int>& hist, int token) {
    if (hist.empty()) return;
    hist.erase(hist.begin());
    hist.push_back(token);
}

}  // namespace

const std::string& system_prompt(Domain d) {
    static const std::string query =
        "You are a helpful assistant that provides efficient join orderings for given queries.";
    static const std::string sequence =
        "You are a specialized assistant that modifies peptide sequences to enhance "
        "antimicrobial activity. Make up to 25% edits to the given peptide sequence.";
    return d == Domain::Query ? query : sequence;
}

PolicyPrompt build_prompt(Domain d, const TaskContext& context) {
    return PolicyPrompt{system_prompt(d), context.text};
}

int NGramPolicy::vocab_size() const { return vocab_of(domain); }

NGramPolicy train_ngram(const std::vector<FinetuneRecord>& records, int epochs, int order,
                        double alpha) {
    if (records.empty()) throw EmptyDataset("train_ngram: no records");
    if (epochs < 1) throw ConfigError("train_ngram: epochs must be >= 1");
    if (order < 1 || order > 7) throw ConfigError("train_ngram: order must be in [1, 7]");
    if (!(alpha > 0.0)) throw ConfigError("train_ngram: alpha must be > 0");
    NGramPolicy policy;
    policy.domain = records.front().domain;
    policy.order = order;
    policy.alpha = alpha;
    for (const auto& rec : records) {
        if (rec.domain != policy.domain) {
            throw MixedDomains("train_ngram: records span multiple domains");
        }
        const std::uint64_t bucket = bucket_of(policy.domain, rec.user);
        std::vector<int> tokens = tokenize_solution(policy.domain, rec.user, rec.assistant);
        tokens.push_back(end_token(policy.domain));
        std::vector<int> hist(static_cast<std::size_t>(order - 1), kBos);
        for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
            const std::uint64_t state = pack_state(static_cast<int>(pos), hist);
            policy.counts[bucket][state][tokens[pos]] += epochs;
            policy.counts[kGlobalBucket][state][tokens[pos]] += epochs;
            push_history(hist, tokens[pos]);
        }
    }
    return policy;
}

std::string sample(const NGramPolicy& policy, const TaskContext& context, double temperature,
                   Rng& rng) {
    if (!policy.trained()) throw UntrainedPolicy("sample: policy has no counts");
    if (temperature < 0.0) throw ConfigError("sample: temperature must be >= 0");
    const int V = policy.vocab_size();
    const int end = end_token(policy.domain);
    const std::uint64_t bucket = bucket_of(policy.domain, context.text);
    std::vector<int> hist(static_cast<std::size_t>(policy.order - 1), kBos);
    std::vector<int> tokens;
    for (int pos = 0; pos < kMaxGenTokens; ++pos) {
        const auto probs = state_probs(policy, bucket, pack_state(pos, hist));
        int chosen = 0;
        if (temperature == 0.0) {
            // argmax, ties by token order
            for (int t = 1; t < V; ++t) {
                if (probs[static_cast<std::size_t>(t)] > probs[static_cast<std::size_t>(chosen)]) {
                    chosen = t;
                }
            }
        } else {
            // weights proportional to p^(1/T), computed in log space
            double max_logit = -1e300;
            std::vector<double> logits(static_cast<std::size_t>(V));
            for (int t = 0; t < V; ++t) {
                logits[static_cast<std::size_t>(t)] =
                    std::log(probs[static_cast<std::size_t>(t)]) / temperature;
                max_logit = std::max(max_logit, logits[static_cast<std::size_t>(t)]);
            }
            double total = 0.0;
            for (int t = 0; t < V; ++t) {
                logits[static_cast<std::size_t>(t)] =
                    std::exp(logits[static_cast<std::size_t>(t)] - max_logit);
                total += logits[static_cast<std::size_t>(t)];
            }
            const double draw = rng.uniform() * total;
            double acc = 0.0;
            chosen = V - 1;
            for (int t = 0; t < V; ++t) {
                acc += logits[static_cast<std::size_t>(t)];
                if (draw < acc) {
                    chosen = t;
                    break;
                }
            }
        }
        if (chosen == end) break;
        tokens.push_back(chosen);
        push_history(hist, chosen);
    }
    return detokenize(policy.domain, context.text, tokens);
}

double nll(const NGramPolicy& policy, const TaskContext& context, const std::string& solution) {
    const std::uint64_t bucket = bucket_of(policy.domain, context.text);
    const std::vector<int> tokens = tokenize_solution(policy.domain, context.text, solution);
    std::vector<int> hist(static_cast<std::size_t>(policy.order - 1), kBos);
    double total = 0.0;
    for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
        const auto probs = state_probs(policy, bucket, pack_state(static_cast<int>(pos), hist));
        total -= std::log(probs[static_cast<std::size_t>(tokens[pos])]);
        push_history(hist, tokens[pos]);
    }
    return total;
}

SanitizeResult sanitize(const std::string& raw, const TaskSpec& task) {
    if (const auto* q = std::get_if<QueryTaskSpec>(&task)) {
        std::string kept;
        for (char c : raw) {
            if ((c >= '0' && c <= '9') || c == '|' || std::isspace(static_cast<unsigned char>(c))) {
                kept.push_back(c);
            }
        }
        auto plan = parse_plan(kept, q->n_relations);
        if (!plan) {
            return {std::nullopt, "not a valid plan for n=" + std::to_string(q->n_relations)};
        }
        return {Candidate{std::move(*plan)}, ""};
    }
    const auto& s = std::get<SeqTaskSpec>(task);
    std::string kept;
    for (char c : raw) {
        if (is_amino_letter(c)) kept.push_back(c);
    }
    if (kept.size() > s.seed.size()) kept.resize(s.seed.size());
    if (kept.size() != s.seed.size()) {
        return {std::nullopt, "length " + std::to_string(kept.size()) + " != seed length " +
                                  std::to_string(s.seed.size())};
    }
    return {Candidate{EditedSeq{repair(s.seed, kept, kSimilarityThreshold), s.id}}, ""};
}

ProposeResult propose(PolicyRef policy, const TaskSpec& task, int count, double temperature,
                      Rng& rng) {
    if (count < 1) throw ConfigError("propose: count must be >= 1");
    ProposeResult result;
    std::set<std::string> seen;
    auto admit = [&](const Candidate& c) {
        if (!seen.insert(candidate_text(c)).second) return false;
        result.candidates.push_back(c);
        return true;
    };

    if (!policy.null_policy()) {
        const TaskContext context = task_context(task);
        const int max_draws = 3 * count;
        if (policy.ngram) {
            for (int draw = 0; draw < max_draws &&
                               static_cast<int>(result.candidates.size()) < count;
                 ++draw) {
                const auto s = sanitize(sample(*policy.ngram, context, temperature, rng), task);
                if (s.accepted()) admit(*s.candidate);
            }
        } else {
            const PolicyPrompt prompt = build_prompt(task_domain(task), context);
            for (int batch = 0; batch < 3 &&
                               static_cast<int>(result.candidates.size()) < count;
                 ++batch) {
                RemoteLLMConfig cfg = *policy.remote;
                cfg.temperature = temperature;
                for (const auto& raw : remote_propose(cfg, prompt, count)) {
                    if (static_cast<int>(result.candidates.size()) >= count) break;
                    const auto s = sanitize(raw, task);
                    if (s.accepted()) admit(*s.candidate);
                }
            }
        }
    }

    const int policy_count = static_cast<int>(result.candidates.size());
    int attempts = 0;
    const int max_attempts = 20 * count;
    while (static_cast<int>(result.candidates.size()) < count) {
        Candidate c = draw_fallback_candidate(task, rng);
        ++attempts;
        // tiny domains can run out of distinct candidates; allow repeats then
        if (seen.insert(candidate_text(c)).second || attempts > max_attempts) {
            result.candidates.push_back(std::move(c));
        }
    }
    result.pad_count = count - policy_count;
    return result;
}

// --- serialization -------------------------------------------------------------

std::string NGramPolicy::to_json() const {
    detail::json payload;
    payload["kind"] = "ngram";
    payload["domain"] = bolt::to_string(domain);
    payload["order"] = order;
    payload["alpha"] = alpha;
    detail::json buckets = detail::json::object();
    char keybuf[24];
    for (const auto& [bucket, states] : counts) {
        std::snprintf(keybuf, sizeof(keybuf), "%016llx",
                      static_cast<unsigned long long>(bucket));
        detail::json jstates = detail::json::object();
        for (const auto& [state, toks] : states) {
            char statebuf[24];
            std::snprintf(statebuf, sizeof(statebuf), "%016llx",
                          static_cast<unsigned long long>(state));
            detail::json jtoks = detail::json::object();
            for (const auto& [tok, cnt] : toks) jtoks[std::to_string(tok)] = cnt;
            jstates[statebuf] = std::move(jtoks);
        }
        buckets[keybuf] = std::move(jstates);
    }
    payload["counts"] = std::move(buckets);
    return detail::wrap_document(payload);
}

NGramPolicy NGramPolicy::from_json(const std::string& text) {
    const detail::json payload = detail::unwrap_document(text);
    if (payload.at("kind").get<std::string>() != "ngram") {
        throw CorruptFile("policy file is not an n-gram policy");
    }
    NGramPolicy p;
    p.domain = domain_from_string(payload.at("domain").get<std::string>());
    p.order = payload.at("order").get<int>();
    p.alpha = payload.at("alpha").get<double>();
    for (const auto& [bucket_key, states] : payload.at("counts").items()) {
        const std::uint64_t bucket = std::stoull(bucket_key, nullptr, 16);
        for (const auto& [state_key, toks] : states.items()) {
            const std::uint64_t state = std::stoull(state_key, nullptr, 16);
            for (const auto& [tok_key, cnt] : toks.items()) {
                p.counts[bucket][state][std::stoi(tok_key)] = cnt.get<std::int64_t>();
            }
        }
    }
    return p;
}

std::string finetune_record_to_jsonl(const FinetuneRecord& rec) {
    detail::ordered_json line;
    line["messages"] = detail::ordered_json::array(
        {detail::ordered_json{{"role", "system"}, {"content", rec.system}},
         detail::ordered_json{{"role", "user"}, {"content", rec.user}},
         detail::ordered_json{{"role", "assistant"}, {"content", rec.assistant}}});
    return line.dump();
}

FinetuneRecord finetune_record_from_jsonl(const std::string& line, Domain domain) {
    detail::json j;
    try {
        j = detail::json::parse(line);
    } catch (const std::exception& e) {
        throw CorruptFile(std::string("bad finetune line: ") + e.what());
    }
    const auto& messages = j.at("messages");
    if (!messages.is_array() || messages.size() != 3) {
        throw CorruptFile("finetune line must hold exactly three messages");
    }
    static const char* kRoles[] = {"system", "user", "assistant"};
    std::string parts[3];
    for (int i = 0; i < 3; ++i) {
        if (messages[static_cast<std::size_t>(i)].at("role").get<std::string>() != kRoles[i]) {
            throw CorruptFile("finetune roles must be system/user/assistant in order");
        }
        parts[i] = messages[static_cast<std::size_t>(i)].at("content").get<std::string>();
    }
    return FinetuneRecord{domain, parts[0], parts[1], parts[2]};
}

std::string finetune_dataset_to_jsonl(const std::vector<FinetuneRecord>& records) {
    std::string out;
    for (const auto& rec : records) {
        out += finetune_record_to_jsonl(rec);
        out += '\n';
    }
    return out;
}

std::vector<FinetuneRecord> finetune_dataset_from_jsonl(const std::string& text, Domain domain) {
    std::vector<FinetuneRecord> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(finetune_record_from_jsonl(line, domain));
    }
    return out;
}

bool validate_finetune_jsonl(const std::string& text, std::string* error) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            (void)finetune_record_from_jsonl(line, Domain::Query);
        } catch (const std::exception& e) {
            if (error) *error = "line " + std::to_string(lineno) + ": " + e.what();
            return false;
        }
    }
    return true;
}

}  // namespace bolt
