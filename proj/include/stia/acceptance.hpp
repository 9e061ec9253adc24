// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

// The release acceptance checks, runnable from the CLI and from tests.

#pragma once

#include <string>
#include <vector>

namespace stia {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double time_limit = 0.0;  // 0 means unbounded
};

inline constexpr int kNumCriteria = 10;

/// Runs criterion `id` in [1, kNumCriteria]. Exceptions are caught and turn
/// into a failed result.
CriterionResult run_criterion(int id, int workers);

/// "PASS [3] name: detail (0.42 s)".
std::string format_result(const CriterionResult& r);

}  // namespace stia
