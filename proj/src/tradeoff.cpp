// Copyright 2026 The STIA Authors
// SPDX-License-Identifier: Apache-2.0

#include "stia/tradeoff.hpp"

#include <stdexcept>

namespace stia {

TradeoffRegion::TradeoffRegion(std::string label, std::vector<AffinePiece> pieces,
                               std::string notes)
    : label_(std::move(label)), pieces_(std::move(pieces)), notes_(std::move(notes)) {
    if (pieces_.empty()) throw std::invalid_argument(label_ + ": region needs at least one piece");
    if (pieces_.front().lo != Rational(0)) throw std::invalid_argument(label_ + ": first piece must start at 0");
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
        if (!pieces_[i].hi || *pieces_[i].hi != pieces_[i + 1].lo) {
            throw std::invalid_argument(label_ + ": pieces must be contiguous");
        }
    }
    for (const auto& p : pieces_) {
        if (p.hi && *p.hi < p.lo) throw std::invalid_argument(label_ + ": empty interval");
    }
    if (pieces_.back().hi) throw std::invalid_argument(label_ + ": last piece must be unbounded");
}

Rational TradeoffRegion::value(const Rational& lambda) const {
    if (lambda < Rational(0)) throw std::invalid_argument("lambda must be >= 0");
    for (const auto& p : pieces_) {
        if (p.covers(lambda)) return p.at(lambda);
    }
    throw std::logic_error("region does not cover lambda");
}

std::vector<Rational> TradeoffRegion::discontinuities() const {
    std::vector<Rational> out;
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
        const Rational x = *pieces_[i].hi;
        if (pieces_[i].at(x) != pieces_[i + 1].at(x)) out.push_back(x);
    }
    return out;
}

bool TradeoffRegion::is_nonincreasing() const {
    for (const auto& p : pieces_) {
        if (p.slope > Rational(0)) return false;
    }
    return discontinuities().empty();
}

TradeoffRegion dof_x_local(int num_tx) {
    if (num_tx < 2) throw std::invalid_argument("dof_x_local: K must be >= 2");
    const Rational knee(2, num_tx + 1);
    return TradeoffRegion(
        "proposed_local_K" + std::to_string(num_tx),
        {
            {0, knee, 0, Rational(2 * num_tx, num_tx + 1)},
            {knee, Rational(1), -1, 2},
            {1, std::nullopt, 0, 1},
        },
        "also a lower bound for the K x N X-channel with N >= 2");
}

TradeoffRegion dof_ic3_local() {
    const Rational knee(3, 5);
    return TradeoffRegion("proposed_ic3_local", {
                                                    {0, knee, 0, Rational(6, 5)},
                                                    {knee, Rational(1), Rational(-1, 2), Rational(3, 2)},
                                                    {1, std::nullopt, 0, 1},
                                                });
}

TradeoffRegion dof_x_global_2x2() {
    const Rational knee(2, 3);
    return TradeoffRegion("global_delayed", {
                                                {0, knee, 0, Rational(4, 3)},
                                                {knee, Rational(1), Rational(-2, 5), Rational(8, 5)},
                                                {1, std::nullopt, 0, gmk_x2_dof()},
                                            });
}

Rational gmk_x2_dof() { return {6, 5}; }
Rational agk_ic3_dof() { return {36, 31}; }

AffinePiece timeshare(const DofPoint& a, const DofPoint& b) {
    if (a.first == b.first) throw std::invalid_argument("timeshare: lambda values must differ");
    if (a.first > b.first) throw std::invalid_argument("timeshare: points must be ordered");
    const Rational slope = (b.second - a.second) / (b.first - a.first);
    return {a.first, b.first, slope, a.second - slope * a.first};
}

TradeoffRegion ia_tdma_region() {
    AffinePiece line = timeshare({0, Rational(4, 3)}, {1, 1});
    return TradeoffRegion("ia_tdma", {line, {1, std::nullopt, 0, 1}});
}

TradeoffRegion ia_gmk_region() {
    AffinePiece line = timeshare({0, Rational(4, 3)}, {1, gmk_x2_dof()});
    return TradeoffRegion("ia_gmk", {line, {1, std::nullopt, 0, gmk_x2_dof()}});
}

TradeoffRegion constant_region(std::string label, Rational value) {
    return TradeoffRegion(std::move(label), {{0, std::nullopt, 0, value}});
}

std::vector<DominanceEntry> dominance_check(const TradeoffRegion& r1, const TradeoffRegion& r2,
                                            std::span<const Rational> grid) {
    std::vector<DominanceEntry> out;
    out.reserve(grid.size());
    for (const Rational& l : grid) {
        const Rational a = r1.value(l);
        const Rational b = r2.value(l);
        out.push_back({l, a, b, a - b, a >= b});
    }
    return out;
}

Table emit_region_table(std::span<const TradeoffRegion> regions, std::span<const Rational> grid) {
    Table t;
    t.header.push_back("lambda");
    for (const auto& r : regions) t.header.push_back(r.label());
    for (const Rational& l : grid) {
        std::vector<std::string> row{to_string(l)};
        for (const auto& r : regions) row.push_back(to_string(r.value(l)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<TradeoffRegion> x2_comparison_regions() {
    return {dof_x_local(2), dof_x_global_2x2(), ia_tdma_region(), ia_gmk_region()};
}

std::vector<TradeoffRegion> ic3_comparison_regions() {
    return {dof_ic3_local(), constant_region("tdma", 1),
            constant_region("global_outdated_agk", agk_ic3_dof())};
}

std::vector<Rational> lambda_grid(std::int64_t denominator, std::int64_t max_numerator) {
    if (denominator < 1 || max_numerator < 0) {
        throw std::invalid_argument("lambda_grid: bad grid parameters");
    }
    std::vector<Rational> out;
    for (std::int64_t i = 0; i <= max_numerator; ++i) out.emplace_back(i, denominator);
    return out;
}

}  // namespace stia
