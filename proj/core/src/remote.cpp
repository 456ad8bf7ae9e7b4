// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#include "bolt/remote.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "bolt/errors.hpp"
#include "json_detail.hpp"

namespace bolt {

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("remote endpoint must be a full URL: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string body_excerpt(const std::string& body) {
    constexpr std::size_t kMax = 200;
    return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

bool retriable_status(int status) { return status == 429 || (status >= 500 && status < 600); }

}  // namespace

std::vector<std::string> remote_propose(const RemoteLLMConfig& cfg, const PolicyPrompt& prompt,
                                        int n) {
    if (n < 1) throw ConfigError("remote_propose: n must be >= 1");
    std::string api_key;
    if (!cfg.api_key_env.empty()) {
        const char* value = std::getenv(cfg.api_key_env.c_str());
        if (!value || value[0] == '\0') {
            throw AuthMissing("environment variable " + cfg.api_key_env + " is not set");
        }
        api_key = value;
    }

    const SplitUrl url = split_url(cfg.endpoint_url);
    detail::ordered_json body;
    body["model"] = cfg.model_name;
    body["messages"] = detail::ordered_json::array(
        {detail::ordered_json{{"role", "system"}, {"content", prompt.system}},
         detail::ordered_json{{"role", "user"}, {"content", prompt.user}}});
    body["temperature"] = cfg.temperature;
    body["n"] = n;
    body["max_tokens"] = cfg.max_tokens;
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);

    int backoff_ms = cfg.retry_backoff_ms;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
            backoff_ms *= 2;
        }
        httplib::Client client(url.origin);
        client.set_connection_timeout(cfg.timeout_sec, 0);
        client.set_read_timeout(cfg.timeout_sec, 0);
        client.set_write_timeout(cfg.timeout_sec, 0);

        auto res = client.Post(url.path, headers, payload, "application/json");
        if (!res) {
            const auto err = res.error();
            if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                err == httplib::Error::Write) {
                if (attempt < cfg.max_retries) continue;
                throw RemoteTimeout("request to " + cfg.endpoint_url + " timed out");
            }
            if (attempt < cfg.max_retries) continue;
            throw RemoteError(-1, "transport error: " + httplib::to_string(err));
        }
        if (retriable_status(res->status)) {
            if (attempt < cfg.max_retries) continue;
            throw RemoteError(res->status, body_excerpt(res->body));
        }
        if (res->status != 200) {
            throw RemoteError(res->status, body_excerpt(res->body));
        }
        detail::json reply;
        try {
            reply = detail::json::parse(res->body);
        } catch (const std::exception&) {
            throw RemoteError(res->status, "unparseable response: " + body_excerpt(res->body));
        }
        std::vector<std::string> out;
        try {
            for (const auto& choice : reply.at("choices")) {
                out.push_back(choice.at("message").at("content").get<std::string>());
            }
        } catch (const std::exception&) {
            throw RemoteError(res->status,
                              "response missing choices[*].message.content: " +
                                  body_excerpt(res->body));
        }
        return out;
    }
    throw RemoteError(-1, "retries exhausted");  // unreachable
}

}  // namespace bolt
