// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace stia {

// Invalid arguments are reported with std::invalid_argument throughout.

/// A protocol step was asked to use channel knowledge the transmitter does
/// not hold at that time.
class PreconditionViolation : public std::logic_error {
public:
    explicit PreconditionViolation(const std::string& what) : std::logic_error(what) {}
};

/// A zero-forcing solve hit a matrix whose condition number exceeds the
/// rejection threshold.
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stia
