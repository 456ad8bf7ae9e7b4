// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#include "bolt/loop.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "bolt/errors.hpp"
#include "json_detail.hpp"

namespace bolt {

std::string to_string(DatasetMode m) {
    return m == DatasetMode::Append ? "append" : "replace-oldest";
}

DatasetMode dataset_mode_from_string(const std::string& s) {
    if (s == "append") return DatasetMode::Append;
    if (s == "replace-oldest") return DatasetMode::ReplaceOldest;
    throw ConfigError("unknown dataset mode: " + s);
}

InnerResult inner_loop(const TaskSpec& task, PolicyRef policy, const InnerConfig& cfg,
                       const AcquisitionConfig& acq) {
    if (cfg.init_count < 1 || cfg.batch < 1 || cfg.top_k < 1 || cfg.budget < cfg.init_count) {
        throw ConfigError("inner_loop: need budget >= init_count >= 1 and batch, top_k >= 1");
    }
    const Domain domain = task_domain(task);
    const double temp = cfg.temperature < 0.0 ? default_temperature(domain) : cfg.temperature;
    Rng rng(cfg.rng_seed);
    Budget budget{cfg.budget, 0};

    InnerResult res;
    res.trajectory.task = task_id(task);
    res.trajectory.rng_seed = cfg.rng_seed;
    std::vector<LatentPoint> X;
    std::vector<CensoredTarget> targets;
    bool out_of_budget = false;

    auto evaluate = [&](const Candidate& c) {
        Outcome o;
        try {
            o = eval_candidate(task, c, budget);
        } catch (const BudgetExhausted&) {
            out_of_budget = true;
            return false;
        }
        res.trajectory.observations.push_back(
            {c, o, static_cast<int>(res.trajectory.observations.size()) + 1});
        X.push_back(encode_candidate(c));
        targets.push_back(to_censored_target(o));
        if (!is_exact(o)) ++res.censored_calls;
        return true;
    };

    ProposeResult init = propose(policy, task, cfg.init_count, temp, rng);
    res.pad_count = init.pad_count;
    for (const auto& c : init.candidates) {
        if (!evaluate(c)) break;
    }
    res.init_best = incumbent(res.trajectory);

    const int steps = (cfg.budget - cfg.init_count) / cfg.batch;
    AcquisitionConfig acq_cfg = acq;
    acq_cfg.batch_size = cfg.batch;
    for (int step = 0; step < steps && !out_of_budget; ++step) {
        if (!incumbent(res.trajectory)) {
            // every call so far censored: no incumbent to acquire against,
            // keep probing with fallback draws until an exact value lands
            for (const auto& c : fallback_candidates(task, cfg.batch, rng)) {
                if (!evaluate(c)) break;
            }
            continue;
        }
        const GPModel model = fit_censored(X, targets);
        for (const auto& z : propose_batch(model, res.trajectory, acq_cfg, rng)) {
            if (!evaluate(decode_candidate(task, z))) break;
        }
    }
    res.calls = budget.used;
    return res;
}

std::vector<FinetuneRecord> build_finetune_dataset(const std::vector<Trajectory>& trajectories,
                                                   const std::vector<TaskContext>& contexts,
                                                   Domain domain, int k, DatasetMode mode,
                                                   std::vector<FinetuneRecord> prior) {
    if (k < 1) throw ConfigError("build_finetune_dataset: k must be >= 1");
    if (trajectories.size() != contexts.size()) {
        throw DimensionMismatch("build_finetune_dataset: trajectories/contexts size mismatch");
    }
    std::vector<FinetuneRecord> fresh;
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
        for (const auto& [cand, value] : top_k(trajectories[i], k)) {
            fresh.push_back(FinetuneRecord{domain, system_prompt(domain), contexts[i].text,
                                           candidate_text(cand)});
        }
    }
    if (mode == DatasetMode::ReplaceOldest && !prior.empty()) {
        const std::size_t drop = std::min(prior.size(), fresh.size());
        prior.erase(prior.begin(), prior.begin() + static_cast<std::ptrdiff_t>(drop));
    }
    prior.insert(prior.end(), fresh.begin(), fresh.end());
    return prior;
}

// --- round reports -----------------------------------------------------------

namespace {

detail::json task_report_to_json(const TaskReport& t) {
    detail::json j;
    j["task"] = t.task.value;
    j["rng_seed"] = t.rng_seed;
    j["calls"] = t.calls;
    j["censored"] = t.censored_calls;
    j["pad_count"] = t.pad_count;
    j["init_best"] = t.init_best ? detail::json(*t.init_best) : detail::json(nullptr);
    j["final_incumbent"] =
        t.final_incumbent ? detail::json(*t.final_incumbent) : detail::json(nullptr);
    j["trajectory_sha256"] = t.trajectory_sha256;
    return j;
}

TaskReport task_report_from_json(const detail::json& j) {
    TaskReport t;
    t.task = TaskId{j.at("task").get<std::string>()};
    t.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    t.calls = j.at("calls").get<int>();
    t.censored_calls = j.at("censored").get<int>();
    t.pad_count = j.at("pad_count").get<int>();
    if (!j.at("init_best").is_null()) t.init_best = j.at("init_best").get<double>();
    if (!j.at("final_incumbent").is_null()) {
        t.final_incumbent = j.at("final_incumbent").get<double>();
    }
    t.trajectory_sha256 = j.at("trajectory_sha256").get<std::string>();
    return t;
}

}  // namespace

std::string RoundReport::to_json() const {
    detail::json payload;
    payload["round"] = round;
    payload["policy_id"] = policy_id;
    payload["policy_sha256"] = policy_sha256;
    payload["dataset_size"] = dataset_size;
    payload["summed_final_incumbent"] = summed_final_incumbent;
    payload["summed_init_best"] = summed_init_best;
    payload["mean_pad_rate"] = mean_pad_rate;
    detail::json rows = detail::json::array();
    for (const auto& t : tasks) rows.push_back(task_report_to_json(t));
    payload["tasks"] = std::move(rows);
    return detail::wrap_document(payload);
}

RoundReport RoundReport::from_json(const std::string& text) {
    const detail::json payload = detail::unwrap_document(text);
    RoundReport r;
    r.round = payload.at("round").get<int>();
    r.policy_id = payload.at("policy_id").get<std::string>();
    r.policy_sha256 = payload.at("policy_sha256").get<std::string>();
    r.dataset_size = payload.at("dataset_size").get<int>();
    r.summed_final_incumbent = payload.at("summed_final_incumbent").get<double>();
    r.summed_init_best = payload.at("summed_init_best").get<double>();
    r.mean_pad_rate = payload.at("mean_pad_rate").get<double>();
    for (const auto& t : payload.at("tasks")) r.tasks.push_back(task_report_from_json(t));
    return r;
}

// --- round execution ----------------------------------------------------------

namespace {

std::vector<InnerResult> run_tasks(std::span<const TaskSpec> tasks, PolicyRef pref,
                                   const InnerConfig& inner, const AcquisitionConfig& acq,
                                   std::uint64_t master_seed, int round, int offset,
                                   int workers) {
    const std::size_t n = tasks.size();
    std::vector<InnerResult> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto body = [&]() {
        std::size_t i;
        while ((i = next.fetch_add(1)) < n) {
            try {
                InnerConfig cfg = inner;
                cfg.rng_seed = mix_seed(master_seed, static_cast<std::uint64_t>(round),
                                        static_cast<std::uint64_t>(offset) + i);
                results[i] = inner_loop(tasks[i], pref, cfg, acq);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        const int count = std::min<int>(workers, static_cast<int>(n));
        pool.reserve(static_cast<std::size_t>(count));
        for (int t = 0; t < count; ++t) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

struct RoundExecution {
    RoundReport report;
    std::vector<Trajectory> trajectories;  // aligned with report.tasks
    std::vector<TaskContext> contexts;
};

RoundExecution execute_round(const Workload& w, int round, const OuterConfig& outer,
                             const InnerConfig& inner, const AcquisitionConfig& acq,
                             PolicyRef pref, int workers) {
    const int offset = (round - 1) * outer.tasks_per_round;
    const auto tasks = w.train_tasks().subspan(static_cast<std::size_t>(offset),
                                               static_cast<std::size_t>(outer.tasks_per_round));
    auto results = run_tasks(tasks, pref, inner, acq, inner.rng_seed, round, offset, workers);

    RoundExecution ex;
    ex.report.round = round;
    std::vector<std::size_t> order(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return task_id(tasks[a]) < task_id(tasks[b]);
    });

    double summed_final = 0.0;
    double summed_init = 0.0;
    int total_pads = 0;
    for (std::size_t oi : order) {
        const auto& r = results[oi];
        TaskReport row;
        row.task = task_id(tasks[oi]);
        row.rng_seed = r.trajectory.rng_seed;
        row.calls = r.calls;
        row.censored_calls = r.censored_calls;
        row.pad_count = r.pad_count;
        row.init_best = r.init_best;
        row.final_incumbent = incumbent(r.trajectory);
        row.trajectory_sha256 = sha256_hex(trajectory_to_jsonl(r.trajectory));
        // undefined incumbents fall back to the task's pessimistic value so
        // the aggregates stay defined
        summed_final += row.final_incumbent ? *row.final_incumbent
                                            : fallback_value(tasks[oi]);
        summed_init += row.init_best ? *row.init_best : fallback_value(tasks[oi]);
        total_pads += r.pad_count;
        ex.report.tasks.push_back(std::move(row));
        ex.trajectories.push_back(results[oi].trajectory);
        ex.contexts.push_back(task_context(tasks[oi]));
    }
    ex.report.summed_final_incumbent = summed_final;
    ex.report.summed_init_best = summed_init;
    ex.report.mean_pad_rate = static_cast<double>(total_pads) /
                              (static_cast<double>(tasks.size()) * inner.init_count);
    return ex;
}

void check_outer_config(const Workload& w, const OuterConfig& outer) {
    if (outer.rounds < 1 || outer.tasks_per_round < 1) {
        throw ConfigError("outer_loop: rounds and tasks_per_round must be >= 1");
    }
    if (w.n_train() < outer.rounds * outer.tasks_per_round) {
        throw InsufficientTasks("outer_loop: workload has " + std::to_string(w.n_train()) +
                                " train tasks, need " +
                                std::to_string(outer.rounds * outer.tasks_per_round));
    }
}

std::string backend_kind_string(PolicyBackend::Kind k) {
    return k == PolicyBackend::Kind::NGram ? "ngram" : "remote";
}

std::string effective_config_json(const OuterConfig& outer, const InnerConfig& inner,
                                  const AcquisitionConfig& acq, const PolicyBackend& backend) {
    detail::json j;
    j["outer"] = {{"rounds", outer.rounds},
                  {"tasks_per_round", outer.tasks_per_round},
                  {"retrain_each_round", outer.retrain_each_round},
                  {"dataset_mode", to_string(outer.dataset_mode)}};
    j["inner"] = {{"budget", inner.budget},
                  {"batch", inner.batch},
                  {"init_count", inner.init_count},
                  {"top_k", inner.top_k},
                  {"temperature", inner.temperature},
                  {"rng_seed", inner.rng_seed}};
    j["acquire"] = {{"pool_size", acq.pool_size},
                    {"local_fraction", acq.local_fraction},
                    {"perturb_sigma", acq.perturb_sigma}};
    j["backend"] = {{"kind", backend_kind_string(backend.kind)},
                    {"order", backend.order},
                    {"alpha", backend.alpha},
                    {"epochs", backend.epochs},
                    {"endpoint_url", backend.remote.endpoint_url},
                    {"model_name", backend.remote.model_name},
                    {"api_key_env", backend.remote.api_key_env},
                    {"max_tokens", backend.remote.max_tokens}};
    return detail::canonical_dump(j);
}

std::string remote_policy_doc(const std::string& policy_id, const std::string& model_name) {
    detail::json payload;
    payload["kind"] = "remote";
    payload["policy_id"] = policy_id;
    payload["model_name"] = model_name;
    return detail::wrap_document(payload);
}

std::string remote_model_from_doc(const std::string& text) {
    return detail::unwrap_document(text).at("model_name").get<std::string>();
}

}  // namespace

OuterResult outer_loop(const Workload& workload, const OuterConfig& outer,
                       const InnerConfig& inner, const AcquisitionConfig& acq,
                       const PolicyBackend& backend, int workers, int stop_after_round) {
    check_outer_config(workload, outer);
    OuterResult res;
    for (int round = 1; round <= outer.rounds; ++round) {
        if (stop_after_round > 0 && round > stop_after_round) break;
        PolicyRef pref;
        if (backend.kind == PolicyBackend::Kind::NGram && res.has_policy) {
            pref.ngram = &res.policy;
        }
        auto ex = execute_round(workload, round, outer, inner, acq, pref, workers);
        res.dataset = build_finetune_dataset(ex.trajectories, ex.contexts, workload.domain,
                                             inner.top_k, outer.dataset_mode,
                                             std::move(res.dataset));
        ex.report.dataset_size = static_cast<int>(res.dataset.size());
        ex.report.policy_id = "BOLT-" + std::to_string(round * outer.tasks_per_round);
        if (backend.kind == PolicyBackend::Kind::NGram) {
            if (outer.retrain_each_round || round == outer.rounds) {
                res.policy = train_ngram(res.dataset, backend.epochs, backend.order,
                                         backend.alpha);
                res.has_policy = true;
                ex.report.policy_sha256 = sha256_hex(res.policy.to_json());
            }
            res.rounds.push_back(std::move(ex.report));
        } else {
            // The retrain step is external for the remote backend: hand back
            // the dataset and pause.
            res.rounds.push_back(std::move(ex.report));
            res.awaiting_finetune = true;
            return res;
        }
    }
    return res;
}

OuterResult run_outer(const std::filesystem::path& run_dir, const std::string& run_name,
                      const Workload& workload, const OuterConfig& outer,
                      const InnerConfig& inner, const AcquisitionConfig& acq,
                      const PolicyBackend& backend, const RunOuterOptions& options) {
    check_outer_config(workload, outer);
    RunStore store(run_dir);
    store.lock();

    const std::string config_sha = sha256_hex(effective_config_json(outer, inner, acq, backend));
    const std::string wl_sha = workload_sha256(workload);

    OuterResult res;
    RunManifest manifest;
    int start_round = 0;
    std::string remote_model;

    if (store.has_manifest()) {
        manifest = store.load_manifest();
        if (manifest.config_sha256 != config_sha) {
            throw SchemaVersionMismatch("run " + run_name +
                                        " exists with a different configuration");
        }
        if (manifest.workload_sha256 != wl_sha) {
            throw SchemaVersionMismatch("run " + run_name + " exists with a different workload");
        }
        for (const auto& [rel, sha] : manifest.artifacts) {
            (void)store.read_artifact_checked(rel, sha);
        }
        start_round = manifest.completed_rounds;
        for (int r = 1; r <= start_round; ++r) {
            res.rounds.push_back(RoundReport::from_json(
                store.read_artifact(RunStore::round_rel(r) + "/report.json")));
        }
        if (start_round > 0) {
            res.dataset = finetune_dataset_from_jsonl(
                store.read_artifact(RunStore::round_rel(start_round) + "/finetune.jsonl"),
                workload.domain);
        }
        if (!manifest.lineage.empty()) {
            const auto& last = manifest.lineage.back();
            const int policy_round = last.cumulative_tasks / outer.tasks_per_round;
            const std::string doc =
                store.read_artifact(RunStore::round_rel(policy_round) + "/policy.json");
            if (backend.kind == PolicyBackend::Kind::NGram) {
                res.policy = NGramPolicy::from_json(doc);
                res.has_policy = true;
            } else {
                remote_model = remote_model_from_doc(doc);
            }
        }
        if (manifest.status == "awaiting_finetune") {
            if (options.resume_model_name.empty()) {
                res.awaiting_finetune = true;
                return res;
            }
            const std::string policy_id =
                "BOLT-" + std::to_string(start_round * outer.tasks_per_round);
            const std::string doc = remote_policy_doc(policy_id, options.resume_model_name);
            const std::string rel = RunStore::round_rel(start_round) + "/policy.json";
            const std::string sha = store.write_artifact(rel, doc);
            manifest.artifacts[rel] = sha;
            manifest.lineage.push_back(
                {policy_id, start_round * outer.tasks_per_round, sha,
                 manifest.artifacts[RunStore::round_rel(start_round) + "/finetune.jsonl"]});
            manifest.status = "in_progress";
            store.save_manifest(manifest);
            remote_model = options.resume_model_name;
        }
        if (manifest.status == "complete") {
            res.already_complete = true;
            return res;
        }
    } else {
        manifest.run_name = run_name;
        manifest.config_sha256 = config_sha;
        manifest.workload_sha256 = wl_sha;
        store.save_manifest(manifest);
    }

    for (int round = start_round + 1; round <= outer.rounds; ++round) {
        if (options.stop_after_round > 0 && round > options.stop_after_round) break;
        PolicyRef pref;
        RemoteLLMConfig remote_cfg = backend.remote;
        if (backend.kind == PolicyBackend::Kind::NGram) {
            if (res.has_policy) pref.ngram = &res.policy;
        } else if (!remote_model.empty()) {
            remote_cfg.model_name = remote_model;
            pref.remote = &remote_cfg;
        }
        auto ex = execute_round(workload, round, outer, inner, acq, pref, options.workers);
        const std::string round_rel = RunStore::round_rel(round);
        for (std::size_t i = 0; i < ex.trajectories.size(); ++i) {
            const std::string rel =
                round_rel + "/trajectories/" + ex.trajectories[i].task.value + ".jsonl";
            manifest.artifacts[rel] =
                store.write_artifact(rel, trajectory_to_jsonl(ex.trajectories[i]));
        }
        res.dataset = build_finetune_dataset(ex.trajectories, ex.contexts, workload.domain,
                                             inner.top_k, outer.dataset_mode,
                                             std::move(res.dataset));
        const std::string dataset_rel = round_rel + "/finetune.jsonl";
        const std::string dataset_sha =
            store.write_artifact(dataset_rel, finetune_dataset_to_jsonl(res.dataset));
        manifest.artifacts[dataset_rel] = dataset_sha;

        ex.report.dataset_size = static_cast<int>(res.dataset.size());
        const int cumulative = round * outer.tasks_per_round;
        ex.report.policy_id = "BOLT-" + std::to_string(cumulative);

        bool awaiting = false;
        if (backend.kind == PolicyBackend::Kind::NGram) {
            if (outer.retrain_each_round || round == outer.rounds) {
                res.policy = train_ngram(res.dataset, backend.epochs, backend.order,
                                         backend.alpha);
                res.has_policy = true;
                const std::string policy_rel = round_rel + "/policy.json";
                const std::string policy_sha =
                    store.write_artifact(policy_rel, res.policy.to_json());
                manifest.artifacts[policy_rel] = policy_sha;
                manifest.lineage.push_back(
                    {ex.report.policy_id, cumulative, policy_sha, dataset_sha});
                ex.report.policy_sha256 = policy_sha;
            }
        } else {
            awaiting = true;
        }

        const std::string report_rel = round_rel + "/report.json";
        manifest.artifacts[report_rel] = store.write_artifact(report_rel, ex.report.to_json());
        res.rounds.push_back(std::move(ex.report));

        manifest.completed_rounds = round;
        manifest.status = awaiting ? "awaiting_finetune" : "in_progress";
        store.save_manifest(manifest);
        if (awaiting) {
            res.awaiting_finetune = true;
            return res;
        }
    }

    if (manifest.completed_rounds == outer.rounds && manifest.status == "in_progress") {
        manifest.status = "complete";
        store.save_manifest(manifest);
    }
    return res;
}

// --- self-augmentation ---------------------------------------------------------

SaCriterion default_sa_criterion() {
    return [](const TaskSpec& task, double value) {
        return value < self_augment_threshold(task);
    };
}

SelfAugmentResult self_augment(const NGramPolicy& policy,
                               const std::vector<FinetuneRecord>& dataset,
                               std::span<const TaskSpec> tasks, int samples_per_task,
                               const SaCriterion& criterion, Budget& budget, double temperature,
                               std::uint64_t rng_seed, int epochs) {
    if (!policy.trained()) throw UntrainedPolicy("self_augment: policy has no counts");
    if (samples_per_task < 1) throw ConfigError("self_augment: samples_per_task must be >= 1");
    SelfAugmentResult res;
    bool exhausted = false;
    for (std::size_t ti = 0; ti < tasks.size() && !exhausted; ++ti) {
        const TaskSpec& task = tasks[ti];
        const TaskContext ctx = task_context(task);
        Rng rng(mix_seed(rng_seed, 0x5a5a, ti));
        std::set<std::string> seen;  // duplicates would only waste oracle calls
        for (int s = 0; s < samples_per_task; ++s) {
            const std::string raw = sample(policy, ctx, temperature, rng);
            ++res.sampled;
            const auto sr = sanitize(raw, task);
            if (!sr.accepted()) continue;
            if (!seen.insert(candidate_text(*sr.candidate)).second) continue;
            Outcome outcome;
            try {
                outcome = eval_candidate(task, *sr.candidate, budget);
            } catch (const BudgetExhausted&) {
                exhausted = true;  // keep partial results
                break;
            }
            ++res.scored;
            if (const auto* e = std::get_if<Exact>(&outcome)) {
                if (criterion(task, e->value)) {
                    res.accepted.push_back(FinetuneRecord{policy.domain,
                                                          system_prompt(policy.domain), ctx.text,
                                                          candidate_text(*sr.candidate)});
                }
            }
        }
    }
    std::vector<FinetuneRecord> combined = dataset;
    combined.insert(combined.end(), res.accepted.begin(), res.accepted.end());
    res.policy = train_ngram(combined, epochs, policy.order, policy.alpha);
    return res;
}

// --- few-shot evaluation ---------------------------------------------------------

FewshotResult eval_fewshot(const NGramPolicy* policy, std::span<const TaskSpec> tasks,
                           const std::vector<int>& ks, double temperature, Budget& budget,
                           std::uint64_t rng_seed) {
    if (ks.empty()) throw ConfigError("eval_fewshot: ks must be non-empty");
    int max_k = 0;
    for (int k : ks) {
        if (k < 1) throw ConfigError("eval_fewshot: every k must be >= 1");
        max_k = std::max(max_k, k);
    }
    FewshotResult res;
    res.ks = ks;
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        const TaskSpec& task = tasks[ti];
        const TaskContext ctx = task_context(task);
        Rng rng(mix_seed(rng_seed, 0xfe40, ti));
        for (int i = 0; i < max_k; ++i) {
            FewshotSample smp;
            smp.task = task_id(task);
            smp.index = i;
            smp.accepted = false;
            smp.value = fallback_value(task);
            std::optional<Candidate> cand;
            if (policy) {
                const auto sr = sanitize(sample(*policy, ctx, temperature, rng), task);
                if (sr.accepted()) cand = sr.candidate;
            } else {
                cand = draw_fallback_candidate(task, rng);
            }
            if (cand) {
                const Outcome o = eval_candidate(task, *cand, budget);
                smp.accepted = true;
                if (const auto* e = std::get_if<Exact>(&o)) {
                    smp.value = e->value;
                } else {
                    smp.value = std::get<Censored>(o).tau;
                }
            }
            res.samples.push_back(std::move(smp));
        }
    }
    res.best_at_k = best_at_k_from_samples(res.samples, ks);
    return res;
}

std::vector<double> best_at_k_from_samples(const std::vector<FewshotSample>& samples,
                                           const std::vector<int>& ks) {
    std::map<std::string, std::vector<double>> per_task;
    for (const auto& s : samples) {
        auto& stream = per_task[s.task.value];
        if (static_cast<int>(stream.size()) != s.index) {
            throw CorruptFile("fewshot samples are not contiguous per task");
        }
        stream.push_back(s.value);
    }
    std::vector<double> out;
    out.reserve(ks.size());
    for (int k : ks) {
        double sum = 0.0;
        for (const auto& [task, stream] : per_task) {
            const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k),
                                                           stream.size());
            double best = stream[0];
            for (std::size_t i = 1; i < take; ++i) best = std::min(best, stream[i]);
            sum += best;
        }
        out.push_back(sum);
    }
    return out;
}

std::string fewshot_samples_to_jsonl(const std::vector<FewshotSample>& samples) {
    std::string out;
    for (const auto& s : samples) {
        detail::json j;
        j["task"] = s.task.value;
        j["index"] = s.index;
        j["accepted"] = s.accepted;
        j["value"] = s.value;
        out += detail::canonical_dump(j);
        out += '\n';
    }
    return out;
}

std::vector<FewshotSample> fewshot_samples_from_jsonl(const std::string& text) {
    std::vector<FewshotSample> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        detail::json j;
        try {
            j = detail::json::parse(line);
        } catch (const std::exception& e) {
            throw CorruptFile(std::string("bad fewshot line: ") + e.what());
        }
        FewshotSample s;
        s.task = TaskId{j.at("task").get<std::string>()};
        s.index = j.at("index").get<int>();
        s.accepted = j.at("accepted").get<bool>();
        s.value = j.at("value").get<double>();
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace bolt
