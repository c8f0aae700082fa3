// Sanity checks for the exact-rational reference: the two hand-derived
// allocation instances must come out exactly, fraction for fraction, before
// the double-precision implementation is held to them.

#include <catch2/catch_amalgamated.hpp>

#include "oracle.hpp"

using oracle::Rat;

TEST_CASE("oracle reproduces the three-session worked instance exactly") {
    // capacity 10, ceiling 4, floor 1, viewers (7,2,1)
    const auto alloc = oracle::popularity(10, 4, 1, {7, 2, 1});
    REQUIRE(alloc.a == Rat(7, 10));
    REQUIRE(alloc.beta_diff == Rat(3));
    REQUIRE(alloc.x_terms[0] == Rat(19, 20));  // 0.95
    REQUIRE(alloc.x_terms[1] == Rat(0));
    REQUIRE(alloc.x_terms[2] == Rat(0));
    REQUIRE(alloc.beta[0] == Rat(4));
    REQUIRE(alloc.beta[1] == Rat(67, 20));  // 3.35
    REQUIRE(alloc.beta[2] == Rat(53, 20));  // 2.65
    REQUIRE_FALSE(alloc.last_rank_capped);
    REQUIRE(alloc.beta[0] + alloc.beta[1] + alloc.beta[2] == Rat(10));

    REQUIRE(oracle::average_satisfaction(alloc, 4, {7, 2, 1}) == Rat(747, 800));  // 0.93375
    REQUIRE(oracle::equal_share(10, 4, 3) == Rat(10, 3));
    REQUIRE(oracle::equal_share_satisfaction(10, 4, 3) == Rat(10, 12));

    const auto shift = oracle::quality_shift(alloc, 10, 4, {7, 2, 1});
    REQUIRE(shift.improved == 9);
    REQUIRE(shift.degraded == 1);
    REQUIRE(shift.unchanged == 0);
}

TEST_CASE("oracle reproduces the four-session cap-cascade instance exactly") {
    // capacity 11, ceiling 3, floor 1, viewers (4,2,1,1): two sessions cap.
    const auto alloc = oracle::popularity(11, 3, 1, {4, 2, 1, 1});
    REQUIRE(alloc.a == Rat(7, 8));  // 0.875
    REQUIRE(alloc.x_terms[0] == Rat(1, 2));
    REQUIRE(alloc.x_terms[1] == Rat(1, 8));
    REQUIRE(alloc.x_terms[2] == Rat(0));
    REQUIRE(alloc.x_terms[3] == Rat(0));
    REQUIRE(alloc.beta[0] == Rat(3));
    REQUIRE(alloc.beta[1] == Rat(3));
    REQUIRE(alloc.beta[2] == Rat(5, 2));
    REQUIRE(alloc.beta[3] == Rat(5, 2));
    REQUIRE_FALSE(alloc.last_rank_capped);
    REQUIRE(alloc.beta[0] + alloc.beta[1] + alloc.beta[2] + alloc.beta[3] == Rat(11));

    REQUIRE(oracle::average_satisfaction(alloc, 3, {4, 2, 1, 1}) == Rat(23, 24));  // 0.958333...
    REQUIRE(oracle::equal_share_satisfaction(11, 3, 4) == Rat(11, 12));

    const auto shift = oracle::quality_shift(alloc, 11, 3, {4, 2, 1, 1});
    REQUIRE(shift.improved == 6);
    REQUIRE(shift.degraded == 2);
    REQUIRE(shift.unchanged == 0);

    // Per-rank deltas implied by the same evaluation.
    REQUIRE(alloc.beta[0] - alloc.beta[1] == Rat(0));
    REQUIRE(alloc.beta[1] - alloc.beta[2] == Rat(1, 2));
}

TEST_CASE("oracle scales linearly with kbps units") {
    const auto unit = oracle::popularity(10, 4, 1, {7, 2, 1});
    const auto kbps = oracle::popularity(10000, 4000, 1000, {7, 2, 1});
    for (std::size_t i = 0; i < 3; ++i) REQUIRE(kbps.beta[i] == unit.beta[i] * 1000);
    REQUIRE(oracle::average_satisfaction(kbps, 4000, {7, 2, 1}) == Rat(747, 800));
}

TEST_CASE("oracle full-quality branch allocates the ceiling everywhere") {
    const auto alloc = oracle::popularity(30000, 2000, 600, {50, 30, 20});
    for (const auto& beta : alloc.beta) REQUIRE(beta == Rat(2000));
    REQUIRE(oracle::average_satisfaction(alloc, 2000, {50, 30, 20}) == Rat(1));
}

TEST_CASE("oracle symmetric counts collapse to the even split") {
    std::vector<std::int64_t> counts(20, 10);
    const auto alloc = oracle::popularity(30000, 2000, 600, counts);
    for (const auto& beta : alloc.beta) REQUIRE(beta == Rat(1500));
}
