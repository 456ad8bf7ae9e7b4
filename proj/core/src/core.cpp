// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#include "bolt/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "bolt/errors.hpp"
#include "bolt/store.hpp"
#include "json_detail.hpp"

namespace bolt {

std::string to_string(Domain d) {
    return d == Domain::Query ? "query" : "sequence";
}

Domain domain_from_string(const std::string& s) {
    if (s == "query") return Domain::Query;
    if (s == "sequence") return Domain::Sequence;
    throw ConfigError("unknown domain: " + s);
}

double default_temperature(Domain d) {
    return d == Domain::Query ? 0.7 : 1.0;
}

std::vector<std::pair<Candidate, double>> top_k(const Trajectory& traj, int k) {
    if (k < 1) throw ConfigError("top_k: k must be >= 1");
    struct Row {
        double value;
        int call;
        const Candidate* cand;
    };
    std::vector<Row> rows;
    for (const auto& obs : traj.observations) {
        if (const auto* e = std::get_if<Exact>(&obs.outcome)) {
            rows.push_back({e->value, obs.call_index, &obs.candidate});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.call < b.call;
    });
    if (static_cast<int>(rows.size()) > k) rows.resize(static_cast<std::size_t>(k));
    std::vector<std::pair<Candidate, double>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.emplace_back(*r.cand, r.value);
    return out;
}

std::optional<double> incumbent(const Trajectory& traj) {
    std::optional<double> best;
    for (const auto& obs : traj.observations) {
        if (const auto* e = std::get_if<Exact>(&obs.outcome)) {
            if (!best || e->value < *best) best = e->value;
        }
    }
    return best;
}

std::vector<std::pair<int, std::optional<double>>> best_so_far_curve(const Trajectory& traj) {
    std::vector<std::pair<int, std::optional<double>>> curve;
    curve.reserve(traj.observations.size());
    std::optional<double> best;
    for (const auto& obs : traj.observations) {
        if (const auto* e = std::get_if<Exact>(&obs.outcome)) {
            if (!best || e->value < *best) best = e->value;
        }
        curve.emplace_back(obs.call_index, best);
    }
    return curve;
}

std::string candidate_text(const Candidate& c) {
    if (const auto* plan = std::get_if<JoinPlan>(&c)) return format_plan(*plan);
    return std::get<EditedSeq>(c).seq;
}

Domain candidate_domain(const Candidate& c) {
    return std::holds_alternative<JoinPlan>(c) ? Domain::Query : Domain::Sequence;
}

std::string observation_to_jsonl(const Observation& obs) {
    return detail::canonical_dump(detail::observation_to_json(obs));
}

Observation observation_from_jsonl(const std::string& line) {
    detail::json j;
    try {
        j = detail::json::parse(line);
    } catch (const std::exception& e) {
        throw CorruptFile(std::string("bad observation line: ") + e.what());
    }
    return detail::observation_from_json(j);
}

std::string trajectory_to_jsonl(const Trajectory& traj) {
    std::string out;
    for (const auto& obs : traj.observations) {
        out += observation_to_jsonl(obs);
        out += '\n';
    }
    return out;
}

std::vector<Observation> observations_from_jsonl(const std::string& text) {
    std::vector<Observation> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(observation_from_jsonl(line));
    }
    return out;
}

// --- internal JSON helpers ----------------------------------------------------

namespace detail {

std::string format_double_17g(double v) {
    if (!std::isfinite(v)) throw NonFiniteInput("cannot serialize non-finite number");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void dump_canonical(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {  // nlohmann objects iterate sorted
                if (!first) out += ',';
                first = false;
                out += json(key).dump();
                out += ':';
                dump_canonical(value, out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& value : j) {
                if (!first) out += ',';
                first = false;
                dump_canonical(value, out);
            }
            out += ']';
            break;
        }
        case json::value_t::string:
            out += j.dump();
            break;
        case json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case json::value_t::number_integer:
            out += std::to_string(j.get<std::int64_t>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(j.get<std::uint64_t>());
            break;
        case json::value_t::number_float:
            out += format_double_17g(j.get<double>());
            break;
        case json::value_t::null:
            out += "null";
            break;
        default:
            throw CorruptFile("unsupported JSON value type");
    }
}

}  // namespace

std::string canonical_dump(const json& j) {
    std::string out;
    dump_canonical(j, out);
    return out;
}

std::string wrap_document(const json& payload) {
    const std::string payload_bytes = canonical_dump(payload);
    json doc;
    doc["schema_version"] = 1;
    doc["sha256"] = sha256_hex(payload_bytes);
    doc["payload"] = payload;
    return canonical_dump(doc);
}

json unwrap_document(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw CorruptFile(std::string("unparseable document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("schema_version") || !doc.contains("sha256") ||
        !doc.contains("payload")) {
        throw CorruptFile("document missing schema_version/sha256/payload");
    }
    if (doc["schema_version"].get<int>() != 1) {
        throw SchemaVersionMismatch("unsupported schema_version " +
                                    doc["schema_version"].dump());
    }
    const std::string expect = doc["sha256"].get<std::string>();
    const std::string actual = sha256_hex(canonical_dump(doc["payload"]));
    if (expect != actual) {
        throw CorruptFile("document hash mismatch: expected " + expect + ", got " + actual);
    }
    return doc["payload"];
}

json candidate_to_json(const Candidate& c) {
    json j;
    if (const auto* plan = std::get_if<JoinPlan>(&c)) {
        j["kind"] = "plan";
        j["order"] = plan->order;
        json ops = json::array();
        for (JoinOp op : plan->ops) ops.push_back(static_cast<int>(op));
        j["ops"] = ops;
    } else {
        const auto& seq = std::get<EditedSeq>(c);
        j["kind"] = "seq";
        j["seed_id"] = seq.seed_id.value;
        j["seq"] = seq.seq;
    }
    return j;
}

Candidate candidate_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "plan") {
        JoinPlan plan;
        plan.order = j.at("order").get<std::vector<int>>();
        for (int op : j.at("ops").get<std::vector<int>>()) {
            if (op != 0 && op != 1) throw CorruptFile("bad join op value");
            plan.ops.push_back(static_cast<JoinOp>(op));
        }
        return plan;
    }
    if (kind == "seq") {
        return EditedSeq{j.at("seq").get<std::string>(), TaskId{j.at("seed_id").get<std::string>()}};
    }
    throw CorruptFile("unknown candidate kind: " + kind);
}

json outcome_to_json(const Outcome& o) {
    json j;
    if (const auto* e = std::get_if<Exact>(&o)) {
        j["kind"] = "exact";
        j["value"] = e->value;
    } else {
        j["kind"] = "censored";
        j["tau"] = std::get<Censored>(o).tau;
    }
    return j;
}

Outcome outcome_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "exact") return Exact{j.at("value").get<double>()};
    if (kind == "censored") return Censored{j.at("tau").get<double>()};
    throw CorruptFile("unknown outcome kind: " + kind);
}

json observation_to_json(const Observation& obs) {
    json j;
    j["call"] = obs.call_index;
    j["candidate"] = candidate_to_json(obs.candidate);
    j["outcome"] = outcome_to_json(obs.outcome);
    return j;
}

Observation observation_from_json(const json& j) {
    Observation obs;
    obs.call_index = j.at("call").get<int>();
    obs.candidate = candidate_from_json(j.at("candidate"));
    obs.outcome = outcome_from_json(j.at("outcome"));
    return obs;
}

}  // namespace detail

}  // namespace bolt
