// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#include "stia/rational.hpp"

#include <cstdlib>

namespace stia {

std::string to_string(const Rational& r) {
    std::int64_t num = r.numerator();
    std::int64_t den = r.denominator();

    // Count the powers of 2 and 5 needed to make the denominator a power of ten.
    std::int64_t rest = den;
    int twos = 0;
    int fives = 0;
    while (rest % 2 == 0) {
        rest /= 2;
        ++twos;
    }
    while (rest % 5 == 0) {
        rest /= 5;
        ++fives;
    }
    if (rest != 1) {
        return std::to_string(num) + "/" + std::to_string(den);
    }

    const int digits = twos > fives ? twos : fives;
    std::int64_t scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    const std::int64_t scaled = num * (scale / den);

    const bool negative = scaled < 0;
    const std::int64_t mag = std::llabs(scaled);
    std::string out = std::to_string(mag / scale);
    if (digits > 0) {
        std::string frac = std::to_string(mag % scale);
        frac.insert(0, static_cast<std::size_t>(digits) - frac.size(), '0');
        out += "." + frac;
    }
    return negative ? "-" + out : out;
}

}  // namespace stia
