#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "hdla/lattice.hpp"

using namespace hdla;

TEST_CASE("level counts set coordinates") {
    CHECK(level(all_zeros(5)) == 0);
    CHECK(level(all_ones(5)) == 5);
    CHECK(level(make_vertex(0b10110, 5)) == 3);
}

TEST_CASE("vertex validation") {
    CHECK_THROWS(make_vertex(0, 0));
    CHECK_THROWS(make_vertex(0, 31));
    CHECK_THROWS(make_vertex(0b100, 2));
    CHECK(make_vertex((1u << 30) - 1, 30).bits == (1u << 30) - 1);
}

TEST_CASE("down neighbors") {
    const auto d = down_neighbors(make_vertex(0b11, 2));
    REQUIRE(d.size() == 2);
    CHECK(((d[0].bits == 0b01 && d[1].bits == 0b10) ||
           (d[0].bits == 0b10 && d[1].bits == 0b01)));
    CHECK(down_neighbors(all_zeros(4)).empty());
    const auto single = down_neighbors(make_vertex(0b100, 3));
    REQUIRE(single.size() == 1);
    CHECK(single[0].bits == 0b000);
}

TEST_CASE("up neighbors") {
    CHECK(up_neighbors(all_ones(3)).empty());
    const auto u = up_neighbors(all_zeros(2));
    REQUIRE(u.size() == 2);
    const auto mid = up_neighbors(make_vertex(0b010, 3));
    REQUIRE(mid.size() == 2);
    CHECK(((mid[0].bits == 0b011 && mid[1].bits == 0b110) ||
           (mid[0].bits == 0b110 && mid[1].bits == 0b011)));
}

TEST_CASE("up and down neighbors are mutually inverse") {
    Xoshiro256 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 8;
        const auto v = make_vertex(rng.bounded(1u << n), n);
        for (const auto& w : up_neighbors(v)) {
            const auto down = down_neighbors(w);
            CHECK(std::count(down.begin(), down.end(), v) == 1);
        }
        for (const auto& w : down_neighbors(v)) {
            const auto up = up_neighbors(w);
            CHECK(std::count(up.begin(), up.end(), v) == 1);
        }
    }
}

TEST_CASE("n=1 has a unique walk") {
    Xoshiro256 rng(7);
    const auto walk = sample_walk(rng, 1);
    const auto steps = walk.steps();
    REQUIRE(steps.size() == 2);
    CHECK(steps[0].bits == 1);
    CHECK(steps[1].bits == 0);
}

TEST_CASE("walk levels descend one per step and stay nested") {
    Xoshiro256 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto steps = sample_walk(rng, 8).steps();
        REQUIRE(steps.size() == 9);
        for (int i = 0; i <= 8; ++i) CHECK(level(steps[static_cast<std::size_t>(i)]) == 8 - i);
        for (int i = 0; i < 8; ++i)
            CHECK((steps[static_cast<std::size_t>(i + 1)].bits &
                   ~steps[static_cast<std::size_t>(i)].bits) == 0);
    }
}

TEST_CASE("n=2 walks are uniform over the two choices") {
    Xoshiro256 rng(11);
    const int draws = 100000;
    int first = 0;
    for (int i = 0; i < draws; ++i)
        if (sample_walk(rng, 2).clear_order[0] == 0) ++first;
    const double freq = static_cast<double>(first) / draws;
    const double sigma = std::sqrt(0.25 / draws);
    CHECK(std::abs(freq - 0.5) <= 3 * sigma);
}

TEST_CASE("n=3 walks are uniform over the six orders") {
    Xoshiro256 rng(13);
    const int draws = 100000;
    std::map<std::vector<std::uint8_t>, int> counts;
    for (int i = 0; i < draws; ++i) ++counts[sample_walk(rng, 3).clear_order];
    REQUIRE(counts.size() == 6);
    const double p = 1.0 / 6.0;
    const double sigma = std::sqrt(p * (1 - p) / draws);
    for (const auto& [order, c] : counts)
        CHECK(std::abs(static_cast<double>(c) / draws - p) <= 4 * sigma);
}

TEST_CASE("walks replay identically for a fixed seed") {
    Xoshiro256 a(123), b(123);
    for (int i = 0; i < 10; ++i)
        CHECK(sample_walk(a, 12).clear_order == sample_walk(b, 12).clear_order);
}
