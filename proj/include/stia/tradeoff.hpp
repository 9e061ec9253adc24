// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

// Piecewise-linear (lambda, sum-DoF) regions in exact rational arithmetic.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stia/rational.hpp"

namespace stia {

/// a * lambda + b on [lo, hi]; hi = nullopt means the piece runs to infinity.
struct AffinePiece {
    Rational lo;
    std::optional<Rational> hi;
    Rational slope;
    Rational intercept;

    Rational at(const Rational& lambda) const { return slope * lambda + intercept; }
    bool covers(const Rational& lambda) const {
        return lambda >= lo && (!hi || lambda <= *hi);
    }
};

class TradeoffRegion {
public:
    /// Pieces must start at 0, be contiguous, and the last must be unbounded.
    TradeoffRegion(std::string label, std::vector<AffinePiece> pieces, std::string notes = {});

    const std::string& label() const noexcept { return label_; }
    const std::string& notes() const noexcept { return notes_; }
    const std::vector<AffinePiece>& pieces() const noexcept { return pieces_; }

    /// Sum-DoF at lambda >= 0. At a shared endpoint the earlier piece is used.
    Rational value(const Rational& lambda) const;

    /// Breakpoints where adjacent pieces disagree.
    std::vector<Rational> discontinuities() const;
    bool is_nonincreasing() const;

private:
    std::string label_;
    std::vector<AffinePiece> pieces_;
    std::string notes_;
};

/// Local CSIT, K x 2 X-channel.
TradeoffRegion dof_x_local(int num_tx);
/// Local CSIT, 3-user interference channel.
TradeoffRegion dof_ic3_local();
/// Global delayed CSIT, 2 x 2 X-channel.
TradeoffRegion dof_x_global_2x2();

/// Sum-DoF of the global-CSIT scheme for the 2 x 2 X-channel with
/// completely outdated CSIT.
Rational gmk_x2_dof();
/// Best known sum-DoF of the 3-user IC with global, completely outdated CSIT.
Rational agk_ic3_dof();

using DofPoint = std::pair<Rational, Rational>;  // (lambda, sum-DoF)

/// Chord between two operating points, valid on [lambda_A, lambda_B].
AffinePiece timeshare(const DofPoint& a, const DofPoint& b);

/// Time sharing between instantaneous IA (4/3 at lambda = 0) and TDMA.
TradeoffRegion ia_tdma_region();
/// Time sharing between instantaneous IA and the outdated-CSIT scheme.
TradeoffRegion ia_gmk_region();
TradeoffRegion constant_region(std::string label, Rational value);

struct DominanceEntry {
    Rational lambda;
    Rational first;
    Rational second;
    Rational advantage;  // first - second
    bool first_at_least_second;
};

std::vector<DominanceEntry> dominance_check(const TradeoffRegion& r1, const TradeoffRegion& r2,
                                            std::span<const Rational> grid);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// One row per grid point: lambda, then each region's value, all rendered
/// exactly.
Table emit_region_table(std::span<const TradeoffRegion> regions, std::span<const Rational> grid);

/// The four curves compared for the 2 x 2 X-channel.
std::vector<TradeoffRegion> x2_comparison_regions();
/// The 3-user IC region against TDMA and the outdated global-CSIT value.
std::vector<TradeoffRegion> ic3_comparison_regions();

/// lambda = i / denominator for i = 0..max_numerator.
std::vector<Rational> lambda_grid(std::int64_t denominator, std::int64_t max_numerator);

}  // namespace stia
