// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "bolt/policy.hpp"

namespace bolt {

// Chat-completion endpoint configuration. The API key is read from the
// environment variable named by api_key_env; an empty name means the endpoint
// needs no auth (local servers).
struct RemoteLLMConfig {
    std::string endpoint_url;  // full URL, e.g. "https://host/v1/chat/completions"
    std::string model_name;
    std::string api_key_env = "OPENAI_API_KEY";
    double temperature = 0.7;
    int max_tokens = 256;
    int n = 1;
    int max_retries = 3;
    int retry_backoff_ms = 500;  // doubles per retry
    int timeout_sec = 60;
    int max_concurrency = 4;
};

// POSTs {"model","messages","temperature","n","max_tokens"} and returns
// choices[*].message.content in order. Retries up to max_retries on 429/5xx
// with exponential backoff. Response content is never interpreted here; all
// validation lives in sanitize().
std::vector<std::string> remote_propose(const RemoteLLMConfig& cfg, const PolicyPrompt& prompt,
                                        int n);

}  // namespace bolt
