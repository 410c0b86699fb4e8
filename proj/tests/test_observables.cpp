#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hdla/observables.hpp"

using namespace hdla;
using obs::PhiMethod;

namespace {

DecreasingWalk walk_of(int n, std::vector<std::uint8_t> order) {
    DecreasingWalk w;
    w.n = n;
    w.clear_order = std::move(order);
    return w;
}

// grows a cluster by running the process a given number of deposits
ClusterState grown_cluster(int n, std::uint64_t deposits, std::uint64_t seed) {
    ClusterState c(n);
    Xoshiro256 rng(seed);
    for (std::uint64_t i = 0; i < deposits && !c.terminated(); ++i) c.deposit(rng);
    return c;
}

} // namespace

TEST_CASE("upsilon examples") {
    ClusterState fresh(3);
    CHECK(obs::upsilon(fresh, make_vertex(0b001, 3)) == 0.0); // sole down-neighbor occupied
    CHECK(obs::upsilon(fresh, make_vertex(0b011, 3)) == 1.0);
    CHECK_THROWS(obs::upsilon(fresh, all_zeros(3)));

    ClusterState c(2); // {00, 10}
    c.deposit_walk(walk_of(2, {0, 1}));
    CHECK(obs::upsilon(c, all_ones(2)) == doctest::Approx(0.5));
}

TEST_CASE("phi is zero on a fresh cluster") {
    ClusterState fresh(6);
    Xoshiro256 rng(1);
    for (VertexBits bits : {VertexBits{0b1}, VertexBits{0b111}, VertexBits{0b101010}}) {
        const auto v = make_vertex(bits, 6);
        CHECK(obs::phi(fresh, v, PhiMethod::exact_dp).value == 0.0);
        CHECK(obs::phi(fresh, v, PhiMethod::brute_force).value == 0.0);
        CHECK(obs::phi(fresh, v, PhiMethod::monte_carlo, &rng, 2000).value == 0.0);
    }
}

TEST_CASE("phi with one occupied up-neighbor equals 1/codim") {
    // the same walk stops one step earlier each time, growing the chain
    // 000001, 000011 (= v), 000111
    ClusterState c(6);
    auto out = c.deposit_walk(walk_of(6, {5, 4, 3, 2, 1, 0}));
    REQUIRE(out.vertex.bits == 0b000001);
    out = c.deposit_walk(walk_of(6, {5, 4, 3, 2, 1, 0}));
    REQUIRE(out.vertex.bits == 0b000011);
    out = c.deposit_walk(walk_of(6, {5, 4, 3, 2, 1, 0}));
    REQUIRE(out.vertex.bits == 0b000111);

    const auto v = make_vertex(0b000011, 6); // codim 4, one occupied ancestor
    const auto dp = obs::phi(c, v, PhiMethod::exact_dp);
    const auto bf = obs::phi(c, v, PhiMethod::brute_force);
    CHECK(dp.value == doctest::Approx(0.25));
    CHECK(dp.value == bf.value);
}

TEST_CASE("phi is one when every up-neighbor is occupied") {
    ClusterState c(3);
    c.deposit_walk(walk_of(3, {2, 1, 0})); // 001
    c.deposit_walk(walk_of(3, {2, 1, 0})); // 011, lands on occupied 001
    c.deposit_walk(walk_of(3, {1, 2, 0})); // 101
    const auto v = make_vertex(0b001, 3);
    for (const auto& u : up_neighbors(v)) REQUIRE(c.occupied(u));
    CHECK(obs::phi(c, v, PhiMethod::exact_dp).value == 1.0);
    CHECK(obs::phi(c, v, PhiMethod::brute_force).value == 1.0);
}

TEST_CASE("phi oracle triangle on random clusters") {
    Xoshiro256 pick(77);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 4 + static_cast<int>(pick.bounded(5));
        auto c = grown_cluster(n, pick.bounded(1u << n), pick.next());
        const auto v = make_vertex(pick.bounded(1u << n), n);
        if (n - level(v) > 6) continue;
        const double dp = obs::phi(c, v, PhiMethod::exact_dp).value;
        const double bf = obs::phi(c, v, PhiMethod::brute_force).value;
        REQUIRE(dp == bf); // exact agreement where both run
        Xoshiro256 mc_rng(trial);
        const std::uint64_t samples = 20000;
        const double mc = obs::phi(c, v, PhiMethod::monte_carlo, &mc_rng, samples).value;
        const double sigma = std::sqrt(dp * (1 - dp) / static_cast<double>(samples));
        CHECK(std::abs(mc - dp) <= 4 * sigma + 1e-12);
    }
}

TEST_CASE("phi method guards") {
    ClusterState c(12);
    Xoshiro256 rng(1);
    const auto low = all_zeros(12);
    CHECK_THROWS(obs::phi(c, make_vertex(0b1, 12), PhiMethod::brute_force)); // codim 11
    CHECK_THROWS(obs::phi(c, low, PhiMethod::monte_carlo, nullptr));
}

TEST_CASE("phi grows and upsilon shrinks along a trajectory") {
    ClusterState c(8);
    Xoshiro256 rng(1234);
    const auto v = make_vertex(0b00001111, 8);
    double last_phi = -1, last_ups = 2;
    for (int block = 0; block < 8; ++block) {
        for (int i = 0; i < 16 && !c.terminated(); ++i) c.deposit(rng);
        const double p = obs::phi(c, v, PhiMethod::exact_dp).value;
        const double u = obs::upsilon(c, v);
        CHECK(p >= last_phi);
        CHECK(u <= last_ups);
        last_phi = p;
        last_ups = u;
    }
}

TEST_CASE("first rho time") {
    RunSpec spec;
    spec.stop = StopRule::until_termination();
    spec.rho_targets = {{0, 0.5}, {2, 1.0}};
    ClusterState c(2);
    Xoshiro256 rng(5);
    const auto rec = run(c, rng, spec);
    CHECK(obs::first_rho_time(rec, 0, 0.5).value() == 0);
    CHECK(obs::first_rho_time(rec, 2, 1.0).value() == *rec.t_end);
}

TEST_CASE("first rho time matches a replayed scan") {
    const int n = 12, k = 1;
    const double rho = 0.5;
    RunSpec spec;
    spec.stop = StopRule::until_termination();
    spec.rho_targets = {{k, rho}};
    ClusterState c(n);
    Xoshiro256 rng = Xoshiro256::for_trial(0xD1A, 3);
    const auto rec = run(c, rng, spec);

    // independent replay with the same stream, scanning counts directly
    ClusterState replay(n);
    Xoshiro256 rng2 = Xoshiro256::for_trial(0xD1A, 3);
    const auto threshold = static_cast<std::uint64_t>(
        std::ceil(rho * static_cast<double>(binom_u64(n, k))));
    std::uint64_t crossing = 0;
    while (!replay.terminated()) {
        replay.deposit(rng2);
        if (replay.level_counts()[k] >= threshold) {
            crossing = replay.steps();
            break;
        }
    }
    CHECK(obs::first_rho_time(rec, k, rho).value() == crossing);
}

TEST_CASE("height examples") {
    ClusterState c(5);
    CHECK(obs::height(c) == 0);
    Xoshiro256 rng(2);
    c.deposit(rng);
    CHECK(obs::height(c) == 1);
    while (!c.terminated()) c.deposit(rng);
    CHECK(obs::height(c) == 5);
}

TEST_CASE("isolated path length on the 2-cube") {
    RunSpec spec;
    spec.stop = StopRule::until_termination();
    bool saw1 = false, saw2 = false;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        ClusterState c(2);
        Xoshiro256 rng(seed);
        const auto rec = run(c, rng, spec);
        const int len = obs::isolated_path_length(c);
        if (*rec.t_end == 2) {
            CHECK(len == 2);
            saw2 = true;
        } else {
            CHECK(len == 1);
            saw1 = true;
        }
    }
    CHECK(saw1);
    CHECK(saw2);
    ClusterState fresh(4);
    CHECK_THROWS(obs::isolated_path_length(fresh));
}

TEST_CASE("isolated path of length 2 or more pins level n-1 to one vertex") {
    RunSpec spec;
    spec.stop = StopRule::until_termination();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ClusterState c(10);
        Xoshiro256 rng = Xoshiro256::for_trial(1, seed);
        run(c, rng, spec);
        if (obs::isolated_path_length(c) >= 2)
            CHECK(c.level_counts()[9] == 1);
    }
}

TEST_CASE("stopping time tau0 at n=16") {
    const auto ctx = theory::TheoryContext::from_exponent(16, 0.45);
    REQUIRE(ctx.ell == 3);
    REQUIRE(ctx.j0 == 5);
    const auto thresholds = obs::zeta_log_thresholds(ctx);
    REQUIRE(thresholds.size() == 5);
    // regression pins from independent evaluation of the closed forms
    CHECK(std::exp(thresholds[0]) == doctest::Approx(1.44709).epsilon(1e-4));
    CHECK(std::exp(thresholds[1]) == doctest::Approx(0.0229533).epsilon(1e-4));

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ClusterState c(16);
        Xoshiro256 rng = Xoshiro256::for_trial(0xD1A, seed);
        const auto hit = obs::run_until_tau0(c, rng, ctx);
        REQUIRE(hit.has_value());
        CHECK(hit->tau0 > 0); // counts start at zero above level k
        CHECK(hit->jstar < ctx.j0);
        const auto count =
            c.level_counts()[static_cast<std::size_t>(ctx.k + hit->jstar)];
        CHECK(std::log(static_cast<double>(count)) >=
              thresholds[static_cast<std::size_t>(hit->jstar)]);
    }
}

TEST_CASE("xy series from an extended run") {
    const auto ctx = theory::TheoryContext::from_exponent(12, 0.45);
    ClusterState c(12);
    Xoshiro256 rng = Xoshiro256::for_trial(0xD1A, 0);
    const auto hit = obs::run_until_tau0(c, rng, ctx);
    REQUIRE(hit.has_value());

    const std::vector<std::uint64_t> cps{0, 1, 2, 4, 8};
    RunSpec spec;
    spec.stop = StopRule::extended_until(hit->tau0 + cps.back());
    for (const auto cp : cps) spec.checkpoints.push_back(hit->tau0 + cp);
    const auto rec = run(c, rng, spec);

    const auto series = obs::xy_series(rec, ctx, hit->tau0, hit->jstar, cps);
    const auto thresholds = obs::zeta_log_thresholds(ctx);
    for (const auto& p : series) {
        if (p.t == 0 && p.j == hit->jstar)
            CHECK(std::log(static_cast<double>(p.x)) >=
                  thresholds[static_cast<std::size_t>(p.j)]); // stopping rule
    }
    // y decomposition recomputed from raw counts at every checkpoint
    for (const auto& p : series) {
        const auto snap = std::find_if(rec.snapshots.begin(), rec.snapshots.end(),
                                       [&](const LevelSnapshot& s) {
                                           return s.t == hit->tau0 + p.t;
                                       });
        REQUIRE(snap != rec.snapshots.end());
        std::uint64_t tail = 0;
        for (std::size_t lev = static_cast<std::size_t>(ctx.k + hit->jstar + p.j);
             lev < snap->level_counts.size(); ++lev)
            tail += snap->level_counts[lev];
        CHECK(p.y == snap->theta * snap->theta + tail);
        if (snap->theta == 0 && p.j == 0) CHECK(p.y == tail);
    }
    CHECK_THROWS(obs::xy_series(rec, ctx, hit->tau0, hit->jstar, {3})); // no snapshot there
}
