// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>

namespace stia {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Folds a seed and a tuple of stream coordinates into one 64-bit key.
constexpr std::uint64_t derive_key(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> coords) noexcept {
    std::uint64_t key = mix64(seed);
    for (std::uint64_t c : coords) {
        key = mix64(key ^ mix64(c + 0x632BE59BD9B4E019ULL));
    }
    return key;
}

/// Counter-based generator: output i of a stream is a pure function of
/// (key, i), so streams for different coordinates can be evaluated in any
/// order or on any thread and produce the same values.
///
/// Satisfies UniformRandomBitGenerator, but the distribution helpers below
/// are used instead of <random> distributions so that results do not depend
/// on the standard library implementation.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) noexcept
        : key_(derive_key(seed, coords)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept { return mix64(key_ ^ mix64(counter_++)); }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the second variate is cached.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double phi = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance = 1.0) noexcept {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal();
        const double im = normal();
        return {s * re, s * im};
    }

    /// Unit-modulus symbol with uniformly distributed phase.
    std::complex<double> unit_phase() noexcept {
        return std::polar(1.0, 2.0 * std::numbers::pi * uniform());
    }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Stream tags keep the RNG coordinates of different consumers disjoint.
enum class Stream : std::uint64_t {
    channel = 1,
    noise = 2,
    symbols = 3,
    trial = 4,
    phases = 5,
};

constexpr std::uint64_t tag(Stream s) noexcept { return static_cast<std::uint64_t>(s); }

}  // namespace stia
