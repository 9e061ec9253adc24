#include <doctest.h>

#include "stia/tradeoff.hpp"

using namespace stia;

namespace {

const Rational kThird(1, 3);

void check_shape(const TradeoffRegion& r) {
    CHECK(r.discontinuities().empty());
    CHECK(r.is_nonincreasing());
    for (const Rational& l : lambda_grid(60, 180)) {
        if (l > Rational(0)) CHECK(r.value(l) <= r.value(l - Rational(1, 60)));
    }
}

}  // namespace

TEST_CASE("local-CSIT X-channel region") {
    const TradeoffRegion r = dof_x_local(2);
    CHECK(r.value(Rational(2, 3)) == Rational(4, 3));
    CHECK(r.value(Rational(0)) == Rational(4, 3));
    CHECK(r.value(Rational(1)) == Rational(1));
    CHECK(r.value(Rational(2)) == Rational(1));
    CHECK(r.value(Rational(5, 6)) == Rational(7, 6));
    CHECK(dof_x_local(3).value(Rational(1, 2)) == Rational(3, 2));
    for (int k = 2; k <= 12; ++k) {
        const TradeoffRegion x = dof_x_local(k);
        CHECK(x.value(Rational(0)) == Rational(2 * k, k + 1));
        CHECK(x.value(Rational(2)) == Rational(1));
        check_shape(x);
    }
    CHECK_THROWS_AS(dof_x_local(1), std::invalid_argument);
    CHECK_THROWS_AS(r.value(Rational(-1, 2)), std::invalid_argument);
}

TEST_CASE("local-CSIT interference channel region") {
    const TradeoffRegion r = dof_ic3_local();
    CHECK(r.value(Rational(3, 5)) == Rational(6, 5));
    CHECK(r.value(Rational(4, 5)) == Rational(11, 10));
    CHECK(r.value(Rational(0)) == Rational(6, 5));
    CHECK(r.value(Rational(1)) == Rational(1));
    CHECK(r.value(Rational(3, 5)) > agk_ic3_dof());
    check_shape(r);
}

TEST_CASE("global delayed CSIT region is continuous at 2/3") {
    const TradeoffRegion r = dof_x_global_2x2();
    CHECK(r.value(Rational(1)) == Rational(6, 5));
    CHECK(r.value(Rational(0)) == Rational(4, 3));
    const auto& p = r.pieces();
    CHECK(p[0].at(Rational(2, 3)) == Rational(4, 3));
    CHECK(p[1].at(Rational(2, 3)) == Rational(4, 3));
    CHECK(r.value(Rational(5)) == Rational(6, 5));
    check_shape(r);
}

TEST_CASE("time sharing chords") {
    const AffinePiece tdma = timeshare({Rational(0), Rational(4, 3)}, {Rational(1), Rational(1)});
    CHECK(tdma.slope == -kThird);
    CHECK(tdma.intercept == Rational(4, 3));
    const AffinePiece gmk = timeshare({Rational(0), Rational(4, 3)}, {Rational(1), Rational(6, 5)});
    CHECK(gmk.slope == Rational(-2, 15));
    CHECK(gmk.intercept == Rational(4, 3));
    const AffinePiece flat = timeshare({Rational(1), Rational(2)}, {Rational(3), Rational(2)});
    CHECK(flat.slope == Rational(0));
    CHECK(flat.at(Rational(2)) == Rational(2));
    CHECK_THROWS_AS(timeshare({Rational(1), Rational(1)}, {Rational(1), Rational(2)}),
                    std::invalid_argument);
    check_shape(ia_tdma_region());
    check_shape(ia_gmk_region());
}

TEST_CASE("dominance over the time-sharing baselines") {
    const std::vector<Rational> at{Rational(2, 3)};
    const auto tdma = dominance_check(dof_x_local(2), ia_tdma_region(), at);
    CHECK(tdma[0].second == Rational(10, 9));
    CHECK(tdma[0].advantage == Rational(2, 9));
    const auto gmk = dominance_check(dof_x_local(2), ia_gmk_region(), at);
    CHECK(gmk[0].advantage == Rational(4, 45));

    const auto grid = lambda_grid(30, 60);
    // Local CSIT beats IA-GMK up to the crossing at lambda = 10/13.
    for (const auto& e : dominance_check(dof_x_local(2), ia_gmk_region(), grid)) {
        CHECK(e.first_at_least_second == (e.lambda <= Rational(10, 13)));
    }
    for (const auto& e : dominance_check(dof_x_local(2), ia_tdma_region(), grid)) {
        CHECK(e.first_at_least_second);
    }
    for (const auto& e : dominance_check(dof_ic3_local(), dof_ic3_local(), grid)) {
        CHECK(e.advantage == Rational(0));
    }
}

TEST_CASE("region tables") {
    const auto regions = x2_comparison_regions();
    const auto grid = lambda_grid(30, 60);
    const Table t = emit_region_table(regions, grid);
    CHECK(t.header == std::vector<std::string>{"lambda", "proposed_local_K2", "global_delayed", "ia_tdma", "ia_gmk"});
    REQUIRE(t.rows.size() == 61);
    CHECK(t.rows[0] == std::vector<std::string>{"0", "4/3", "4/3", "4/3", "4/3"});
    CHECK(t.rows[3][0] == "0.1");
    CHECK(t.rows[30][1] == "1");

    const Table f5 = emit_region_table(ic3_comparison_regions(), grid);
    CHECK(f5.header.size() == 4);
    CHECK(f5.rows[18] == std::vector<std::string>{"0.6", "1.2", "1", "36/31"});

    const Table empty = emit_region_table(regions, std::vector<Rational>{});
    CHECK(empty.header.size() == 5);
    CHECK(empty.rows.empty());
}

TEST_CASE("exact rendering") {
    CHECK(to_string(Rational(3, 8)) == "0.375");
    CHECK(to_string(Rational(-1, 20)) == "-0.05");
    CHECK(to_string(Rational(4, 3)) == "4/3");
    CHECK(to_string(Rational(-7)) == "-7");
    CHECK(to_string(Rational(0)) == "0");
}

TEST_CASE("malformed regions are rejected") {
    CHECK_THROWS_AS(TradeoffRegion("x", {}), std::invalid_argument);
    CHECK_THROWS_AS(TradeoffRegion("x", {{Rational(1), std::nullopt, Rational(0), Rational(1)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(TradeoffRegion("x", {{Rational(0), Rational(1), Rational(0), Rational(1)}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(TradeoffRegion("x", {{Rational(0), Rational(1), Rational(0), Rational(1)},
                                         {Rational(2), std::nullopt, Rational(0), Rational(1)}}),
                    std::invalid_argument);
    const TradeoffRegion jump("jump", {{Rational(0), Rational(1), Rational(0), Rational(2)},
                                       {Rational(1), std::nullopt, Rational(0), Rational(1)}});
    CHECK(jump.discontinuities() == std::vector<Rational>{Rational(1)});
    CHECK_FALSE(jump.is_nonincreasing());
}
