#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hdla/harness.hpp"
#include "hdla/observables.hpp"

using namespace hdla;
using namespace hdla::harness;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.n_grid = {4};
    cfg.trials = 3;
    cfg.master_seed = 7;
    return cfg;
}

std::string csv_of(const SuiteResult& res) {
    std::ostringstream os;
    write_csv(os, res.rows);
    return os.str();
}

} // namespace

TEST_CASE("reports are identical across repeated runs and worker counts") {
    auto cfg = tiny_config();
    cfg.n_grid = {8};
    cfg.trials = 12;
    cfg.parallelism = 1;
    const auto once = csv_of(fullness_suite(cfg));
    const auto twice = csv_of(fullness_suite(cfg));
    CHECK(once == twice);
    cfg.parallelism = 3;
    CHECK(csv_of(fullness_suite(cfg)) == once);
}

TEST_CASE("csv matches the golden file byte for byte") {
    const auto res = fullness_suite(tiny_config());
    const std::string got = csv_of(res);
    std::ifstream in(std::string(HDLA_GOLDEN_DIR) + "/fullness_n4_seed7.csv",
                     std::ios::binary);
    REQUIRE(in.good());
    std::stringstream want;
    want << in.rdbuf();
    CHECK(got == want.str());
}

TEST_CASE("json rows carry identical keys") {
    const auto res = fullness_suite(tiny_config());
    std::ostringstream os;
    write_json(os, res.rows);
    const auto arr = nlohmann::json::parse(os.str());
    REQUIRE(arr.is_array());
    REQUIRE(!arr.empty());
    const std::vector<std::string> keys{"ci_half_width", "experiment", "metric",
                                        "n",             "scope",      "seed",
                                        "trials",        "value"};
    for (const auto& obj : arr) {
        std::vector<std::string> got;
        for (auto it = obj.begin(); it != obj.end(); ++it) got.push_back(it.key());
        std::sort(got.begin(), got.end());
        CHECK(got == keys);
    }
}

TEST_CASE("csv escaping quotes fields with separators") {
    std::ostringstream os;
    write_csv(os, {ReportRow{"exp,eriment", 1, "scope\"q", "m", 2.0, std::nullopt,
                             std::nullopt, std::nullopt}});
    CHECK(os.str() ==
          "experiment,n,scope,metric,value,ci_half_width,trials,seed\n"
          "\"exp,eriment\",1,\"scope\"\"q\",m,2,,,\n");
}

TEST_CASE("run_trials rejects dimensions above the cap before any work") {
    RunSpec spec;
    spec.stop = StopRule::until_termination();
    CHECK_THROWS(run_trials(31, 4, 1, spec, 2));
    CHECK_THROWS(run_trials(0, 4, 1, spec, 2));
}

TEST_CASE("run_trials matches sequential execution") {
    RunSpec spec;
    spec.stop = StopRule::until_termination();
    const auto par = run_trials(8, 10, 0xD1A, spec, 4);
    for (std::uint64_t i = 0; i < 10; ++i) {
        ClusterState c(8);
        Xoshiro256 rng = Xoshiro256::for_trial(0xD1A, i);
        const auto seq = run(c, rng, spec);
        CHECK(par[i].t_end == seq.t_end);
        CHECK(par[i].final_level_counts == seq.final_level_counts);
    }
}

TEST_CASE("fullness suite invariants on a small lattice") {
    const auto res = fullness_suite(tiny_config());
    CHECK(res.passed());
    bool saw_k0_full = false;
    for (const auto& row : res.rows) {
        if (row.metric.rfind("occupied_fraction", 0) == 0) {
            CHECK(row.value >= 0.0);
            CHECK(row.value <= 1.0);
        }
        if (row.scope == "aggregate" && row.metric == "full_fraction(k=0)") {
            CHECK(row.value == 1.0);
            saw_k0_full = true;
        }
    }
    CHECK(saw_k0_full);
}

TEST_CASE("notall suite bound column equals the theory function") {
    auto cfg = tiny_config();
    cfg.n_grid = {10};
    cfg.trials = 5;
    const auto res = notall_suite(cfg);
    CHECK(res.passed());
    int bound_rows = 0;
    for (const auto& row : res.rows) {
        if (row.metric.rfind("notall_bound(k=", 0) == 0) {
            const int k = std::stoi(row.metric.substr(15));
            CHECK(row.value == theory::notall_bound(10, k));
            ++bound_rows;
        }
    }
    CHECK(bound_rows == 9);
}

TEST_CASE("height suite emits reference lines and fractions") {
    auto cfg = tiny_config();
    cfg.n_grid = {16};
    cfg.trials = 5;
    cfg.height_levels = {1, 2, 3};
    const auto res = height_suite(cfg);
    CHECK(res.passed());
    const double phi_const = 1.0 + std::sqrt(3.0);
    bool saw_reference = false, saw_skip = false;
    for (const auto& row : res.rows) {
        if (row.metric == "reference(k=3)") {
            CHECK(row.value == doctest::Approx((1.0 + phi_const + 0.5) * 3));
            saw_reference = true;
        }
        if (row.metric.rfind("skipped_tau_below_1", 0) == 0) saw_skip = true;
        if (row.metric.rfind("height_le_reference_fraction", 0) == 0) {
            CHECK(row.value >= 0.0);
            CHECK(row.value <= 1.0);
        }
    }
    // tau_{1,0.01} = 0.0025 C(16,2) = 0.3 rounds below one step
    CHECK(saw_skip);
    CHECK(saw_reference);
}

TEST_CASE("tend scaling on a 2-point grid") {
    ExperimentConfig cfg;
    cfg.n_grid = {6, 10};
    cfg.trials = 30;
    cfg.master_seed = 0xD1A;
    const auto res = tend_scaling(cfg);
    double r6 = -1, r10 = -1;
    for (const auto& row : res.rows) {
        if (row.metric == "mean_t_end_ratio" && row.n == 6) r6 = row.value;
        if (row.metric == "mean_t_end_ratio" && row.n == 10) r10 = row.value;
    }
    REQUIRE(r6 > 0);
    REQUIRE(r10 > 0);
    CHECK(r10 < r6);
    CHECK(res.passed());
}

TEST_CASE("xbound suite wiring at n=12") {
    ExperimentConfig cfg;
    cfg.n_grid = {12};
    cfg.trials = 8;
    cfg.master_seed = 0xD1A;
    cfg.checkpoints = {1, 2, 4, 8};
    const auto res = xbound_suite(cfg);
    const auto ctx = theory::TheoryContext::from_exponent(12, cfg.a_exponent);
    double reached = -1;
    bool bound_checked = false;
    for (const auto& row : res.rows) {
        if (row.metric == "tau0_reached_fraction") reached = row.value;
        if (row.metric == "x_bound(j=1,t=4)") {
            std::vector<LogScalar> alphas{theory::zeta(0, ctx), theory::zeta(1, ctx)};
            std::vector<LogScalar> betas{LogScalar::from_log(0.0) /
                                         theory::log_binom(ctx.n, ctx.ell)};
            CHECK(row.value ==
                  doctest::Approx(theory::rec1_upper_log(alphas, betas, 4, 1).value()));
            bound_checked = true;
        }
    }
    CHECK(reached == 1.0); // tau0 exists in every trial at this size
    CHECK(bound_checked);
}

TEST_CASE("suite registry") {
    CHECK(suite_names().size() == 9);
    CHECK_THROWS(run_suite("nope", tiny_config()));
}
