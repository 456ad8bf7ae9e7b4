// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#include "bolt/workload.hpp"

#include <cstdio>

#include "bolt/errors.hpp"
#include "bolt/store.hpp"
#include "json_detail.hpp"

namespace bolt {

namespace {

std::string make_task_id(Domain domain, int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%c%04d", domain == Domain::Query ? 'q' : 's', index);
    return buf;
}

detail::json workload_payload(const Workload& w) {
    detail::json j;
    j["domain"] = to_string(w.domain);
    j["n_validation"] = w.n_validation;
    j["seed"] = w.seed;
    detail::json tasks = detail::json::array();
    for (const auto& t : w.tasks) tasks.push_back(detail::task_spec_to_json(t));
    j["tasks"] = tasks;
    return j;
}

}  // namespace

const TaskSpec* Workload::find(const TaskId& id) const {
    for (const auto& t : tasks) {
        if (task_id(t) == id) return &t;
    }
    return nullptr;
}

Workload gen_workload(Domain domain, int n_tasks, int n_validation, std::uint64_t seed,
                      const WorkloadParams& params) {
    if (n_tasks < 1) throw ConfigError("gen_workload: n_tasks must be >= 1");
    if (n_validation < 0 || n_validation >= n_tasks) {
        throw ConfigError("gen_workload: need 0 <= n_validation < n_tasks");
    }
    Workload w;
    w.domain = domain;
    w.seed = seed;
    w.n_validation = n_validation;
    w.tasks.reserve(static_cast<std::size_t>(n_tasks));
    for (int i = 0; i < n_tasks; ++i) {
        const std::uint64_t task_seed = mix_seed(seed, static_cast<std::uint64_t>(i) + 1);
        if (domain == Domain::Query) {
            QueryTaskSpec spec = gen_query_task(task_seed, params.n_relations);
            spec.id = TaskId{make_task_id(domain, i)};
            spec.noise_sigma = params.noise_sigma;
            w.tasks.emplace_back(std::move(spec));
        } else {
            SeqTaskSpec spec = gen_seq_task(task_seed, params.seq_min_len, params.seq_max_len);
            spec.id = TaskId{make_task_id(domain, i)};
            w.tasks.emplace_back(std::move(spec));
        }
    }
    return w;
}

std::string workload_to_json(const Workload& w) {
    return detail::wrap_document(workload_payload(w));
}

Workload workload_from_json(const std::string& text) {
    const detail::json payload = detail::unwrap_document(text);
    Workload w;
    w.domain = domain_from_string(payload.at("domain").get<std::string>());
    w.seed = payload.at("seed").get<std::uint64_t>();
    w.n_validation = payload.at("n_validation").get<int>();
    for (const auto& t : payload.at("tasks")) {
        w.tasks.push_back(detail::task_spec_from_json(t));
    }
    if (w.n_validation < 0 || w.n_validation >= static_cast<int>(w.tasks.size())) {
        throw CorruptFile("workload: invalid validation split");
    }
    return w;
}

std::string workload_sha256(const Workload& w) {
    return sha256_hex(detail::canonical_dump(workload_payload(w)));
}

// --- task spec serialization --------------------------------------------------

namespace detail {

json task_spec_to_json(const TaskSpec& spec) {
    json j;
    if (const auto* q = std::get_if<QueryTaskSpec>(&spec)) {
        j["kind"] = "query";
        j["id"] = q->id.value;
        j["n"] = q->n_relations;
        j["cards"] = q->cardinalities;
        j["sel"] = q->selectivity;
        j["tau"] = q->timeout_tau;
        j["noise_sigma"] = q->noise_sigma;
        j["gen_seed"] = q->gen_seed;
    } else {
        const auto& s = std::get<SeqTaskSpec>(spec);
        j["kind"] = "sequence";
        j["id"] = s.id.value;
        j["seed_seq"] = s.seed;
        j["seed_score"] = s.seed_score;
        j["gen_seed"] = s.gen_seed;
        // hidden: consumed by eval_seq only, never by policies or BO
        json rows = json::array();
        for (const auto& row : s.motif_weights) {
            rows.push_back(std::vector<double>(row.begin(), row.end()));
        }
        j["hidden_motif_weights"] = rows;
    }
    return j;
}

TaskSpec task_spec_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "query") {
        QueryTaskSpec q;
        q.id = TaskId{j.at("id").get<std::string>()};
        q.n_relations = j.at("n").get<int>();
        q.cardinalities = j.at("cards").get<std::vector<double>>();
        q.selectivity = j.at("sel").get<std::vector<std::vector<double>>>();
        q.timeout_tau = j.at("tau").get<double>();
        q.noise_sigma = j.at("noise_sigma").get<double>();
        q.gen_seed = j.at("gen_seed").get<std::uint64_t>();
        if (q.n_relations < 1 ||
            q.cardinalities.size() != static_cast<std::size_t>(q.n_relations) ||
            q.selectivity.size() != static_cast<std::size_t>(q.n_relations)) {
            throw CorruptFile("query task: inconsistent dimensions");
        }
        return q;
    }
    if (kind == "sequence") {
        SeqTaskSpec s;
        s.id = TaskId{j.at("id").get<std::string>()};
        s.seed = j.at("seed_seq").get<std::string>();
        s.seed_score = j.at("seed_score").get<double>();
        s.gen_seed = j.at("gen_seed").get<std::uint64_t>();
        for (const auto& row : j.at("hidden_motif_weights")) {
            auto vals = row.get<std::vector<double>>();
            if (vals.size() != kAminoAlphabetSize) {
                throw CorruptFile("sequence task: bad weight row");
            }
            std::array<double, kAminoAlphabetSize> arr{};
            std::copy(vals.begin(), vals.end(), arr.begin());
            s.motif_weights.push_back(arr);
        }
        if (s.motif_weights.size() != s.seed.size() || s.seed.empty()) {
            throw CorruptFile("sequence task: inconsistent dimensions");
        }
        return s;
    }
    throw CorruptFile("unknown task kind: " + kind);
}

}  // namespace detail

}  // namespace bolt
