// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#include "bolt/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "bolt/errors.hpp"
#include "json_detail.hpp"

namespace bolt {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("runtime", "sha256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string canonical_json(std::string_view json_text) {
    detail::json j;
    try {
        j = detail::json::parse(json_text);
    } catch (const std::exception& e) {
        throw CorruptFile(std::string("canonical_json: unparseable input: ") + e.what());
    }
    return detail::canonical_dump(j);
}

// --- manifest -------------------------------------------------------------------

std::string RunManifest::to_json() const {
    detail::json payload;
    payload["run_name"] = run_name;
    payload["config_sha256"] = config_sha256;
    payload["workload_sha256"] = workload_sha256;
    payload["status"] = status;
    payload["completed_rounds"] = completed_rounds;
    detail::json lin = detail::json::array();
    for (const auto& e : lineage) {
        detail::json entry;
        entry["policy_id"] = e.policy_id;
        entry["cumulative_tasks"] = e.cumulative_tasks;
        entry["policy_sha256"] = e.policy_sha256;
        entry["dataset_sha256"] = e.dataset_sha256;
        lin.push_back(std::move(entry));
    }
    payload["lineage"] = std::move(lin);
    payload["artifacts"] = artifacts;
    return detail::wrap_document(payload);
}

RunManifest RunManifest::from_json(const std::string& text) {
    const detail::json payload = detail::unwrap_document(text);
    RunManifest m;
    m.run_name = payload.at("run_name").get<std::string>();
    m.config_sha256 = payload.at("config_sha256").get<std::string>();
    m.workload_sha256 = payload.at("workload_sha256").get<std::string>();
    m.status = payload.at("status").get<std::string>();
    m.completed_rounds = payload.at("completed_rounds").get<int>();
    for (const auto& e : payload.at("lineage")) {
        PolicyLineageEntry entry;
        entry.policy_id = e.at("policy_id").get<std::string>();
        entry.cumulative_tasks = e.at("cumulative_tasks").get<int>();
        entry.policy_sha256 = e.at("policy_sha256").get<std::string>();
        entry.dataset_sha256 = e.at("dataset_sha256").get<std::string>();
        m.lineage.push_back(std::move(entry));
    }
    int last = 0;
    for (const auto& e : m.lineage) {
        if (e.cumulative_tasks <= last) {
            throw CorruptFile("manifest lineage must grow strictly in task count");
        }
        last = e.cumulative_tasks;
    }
    m.artifacts = payload.at("artifacts").get<std::map<std::string, std::string>>();
    return m;
}

// --- run store -------------------------------------------------------------------

RunStore::RunStore(fs::path dir, bool create) : dir_(std::move(dir)) {
    if (create) {
        fs::create_directories(dir_);
    } else if (!fs::exists(dir_)) {
        throw ConfigError("run directory does not exist: " + dir_.string());
    }
}

RunStore::~RunStore() { unlock(); }

void RunStore::lock() {
    if (locked_) return;
    const fs::path lock_path = dir_ / ".lock";
    const int fd = ::open(lock_path.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        throw LockedRun("run directory is locked by another writer: " + dir_.string());
    }
    const std::string pid = std::to_string(::getpid()) + "\n";
    (void)!::write(fd, pid.data(), pid.size());
    ::close(fd);
    locked_ = true;
}

void RunStore::unlock() noexcept {
    if (!locked_) return;
    std::error_code ec;
    fs::remove(dir_ / ".lock", ec);
    locked_ = false;
}

bool RunStore::exists(const std::string& rel) const { return fs::exists(dir_ / rel); }

std::string RunStore::write_artifact(const std::string& rel, const std::string& bytes) {
    const fs::path path = dir_ / rel;
    if (fs::exists(path)) {
        const std::string existing = read_artifact(rel);
        if (existing != bytes) {
            throw CorruptFile("refusing to overwrite " + rel + " with different content");
        }
        return sha256_hex(bytes);
    }
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("runtime", "cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    fs::rename(tmp, path);
    return sha256_hex(bytes);
}

std::string RunStore::read_artifact(const std::string& rel) const {
    const fs::path path = dir_ / rel;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptFile("missing artifact: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string RunStore::read_artifact_checked(const std::string& rel,
                                            const std::string& expected_sha256) const {
    std::string bytes = read_artifact(rel);
    const std::string actual = sha256_hex(bytes);
    if (actual != expected_sha256) {
        throw CorruptFile("artifact " + rel + " hash mismatch: expected " + expected_sha256 +
                          ", got " + actual);
    }
    return bytes;
}

bool RunStore::has_manifest() const { return exists("manifest.json"); }

RunManifest RunStore::load_manifest() const {
    return RunManifest::from_json(read_artifact("manifest.json"));
}

void RunStore::save_manifest(const RunManifest& manifest) {
    const fs::path path = dir_ / "manifest.json";
    const fs::path tmp = path.string() + ".tmp";
    const std::string bytes = manifest.to_json();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("runtime", "cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    fs::rename(tmp, path);
}

std::string RunStore::round_rel(int round) { return "round_" + std::to_string(round); }

}  // namespace bolt
