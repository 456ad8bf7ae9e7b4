// Copyright 2026 The bolt Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bolt {

// Every error carries a short machine-readable category. The CLI maps
// categories to exit codes: "config" -> 2, "budget" -> 4, everything else -> 3.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& what)
        : std::runtime_error(what), category_(std::move(category)) {}
    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

#define BOLT_DEFINE_ERROR(Name, category_literal)                        \
    class Name : public Error {                                          \
    public:                                                              \
        explicit Name(const std::string& what)                           \
            : Error(category_literal, what) {}                           \
    }

BOLT_DEFINE_ERROR(ConfigError, "config");
BOLT_DEFINE_ERROR(SchemaVersionMismatch, "config");
BOLT_DEFINE_ERROR(InsufficientTasks, "config");
BOLT_DEFINE_ERROR(BudgetExhausted, "budget");
BOLT_DEFINE_ERROR(DimensionMismatch, "runtime");
BOLT_DEFINE_ERROR(EmptySeed, "runtime");
BOLT_DEFINE_ERROR(NonFiniteInput, "runtime");
BOLT_DEFINE_ERROR(DegenerateData, "runtime");
BOLT_DEFINE_ERROR(NoExactData, "runtime");
BOLT_DEFINE_ERROR(NoIncumbent, "runtime");
BOLT_DEFINE_ERROR(InvalidPlan, "runtime");
BOLT_DEFINE_ERROR(ConstraintViolated, "runtime");
BOLT_DEFINE_ERROR(UntrainedPolicy, "runtime");
BOLT_DEFINE_ERROR(EmptyDataset, "runtime");
BOLT_DEFINE_ERROR(MixedDomains, "runtime");
BOLT_DEFINE_ERROR(UnknownToken, "runtime");
BOLT_DEFINE_ERROR(AuthMissing, "runtime");
BOLT_DEFINE_ERROR(RemoteTimeout, "runtime");
BOLT_DEFINE_ERROR(CorruptFile, "runtime");
BOLT_DEFINE_ERROR(LockedRun, "runtime");

#undef BOLT_DEFINE_ERROR

class RemoteError : public Error {
public:
    RemoteError(int status, const std::string& body_excerpt)
        : Error("runtime",
                "remote endpoint error, status " + std::to_string(status) +
                    (body_excerpt.empty() ? "" : ": " + body_excerpt)),
          status_(status) {}
    int status() const noexcept { return status_; }

private:
    int status_;
};

}  // namespace bolt
