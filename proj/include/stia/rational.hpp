// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace stia {

using Rational = boost::rational<std::int64_t>;

/// Exact decimal when the denominator has only factors 2 and 5, otherwise
/// "p/q".
std::string to_string(const Rational& r);

inline double to_double(const Rational& r) {
    return boost::rational_cast<double>(r);
}

}  // namespace stia
