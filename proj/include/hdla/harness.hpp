// Parallel trial execution and the verification experiment suites.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hdla/dla.hpp"
#include "hdla/report.hpp"
#include "hdla/theory.hpp"

namespace hdla::harness {

inline constexpr std::uint64_t kPilotSeed = 0xD1A;

struct ExperimentConfig {
    std::vector<int> n_grid{20};
    std::uint64_t trials = 100;
    std::uint64_t master_seed = kPilotSeed;
    double eps = 0.01;        // density parameter of the reference times
    double a_exponent = 0.45; // path-length exponent for tau0/xbound studies
    std::vector<std::uint64_t> checkpoints; // relative times for xbound
    std::vector<int> height_levels{1, 2, 3, 4};
    double height_delta = 0.5;
    double xbound_slack = 0.25;
    int parallelism = 0; // 0 = hardware concurrency
};

struct SuiteResult {
    std::vector<ReportRow> rows;
    std::vector<std::string> failures; // empty means all assertions passed
    bool passed() const { return failures.empty(); }
};

// Runs `trials` independent trials of `body` (trial index, trial rng);
// results are identical to sequential execution for any worker count.
void parallel_trials(std::uint64_t trials, std::uint64_t master_seed, int parallelism,
                     const std::function<void(std::uint64_t, Xoshiro256&)>& body);

// Convenience wrapper running the same RunSpec on fresh clusters.
std::vector<TrialRecord> run_trials(int n, std::uint64_t trials, std::uint64_t master_seed,
                                    const RunSpec& spec, int parallelism);

// Occupied fraction of every level at termination; fullness aggregates.
SuiteResult fullness_suite(const ExperimentConfig& cfg);
// Unoccupied fractions vs the guaranteed-vacancy bound.
SuiteResult notall_suite(const ExperimentConfig& cfg);
// Terminal isolated-path lengths; mean trend across the n grid.
SuiteResult path_suite(const ExperimentConfig& cfg);
// Cluster height at the reference times vs the (1+phi+delta)k line.
SuiteResult height_suite(const ExperimentConfig& cfg);
// Mean T_end and T_end/2^n across the n grid; decreasing-ratio trend.
SuiteResult tend_scaling(const ExperimentConfig& cfg);
// Extended-process level series vs the recurrence upper bound seeded with
// the zeta thresholds.
SuiteResult xbound_suite(const ExperimentConfig& cfg);
// Closed-form identity and asymptotic-estimate checks (no simulation).
SuiteResult identities_suite(const ExperimentConfig& cfg);
// Monte Carlo validation of the concentration bound and its Hoeffding
// crossover.
SuiteResult conc_suite(const ExperimentConfig& cfg);
// Exactness of the recurrence closed forms on random instances run at
// equality.
SuiteResult rec1_suite(const ExperimentConfig& cfg);

// Registry used by the CLI: fullness|notall|path|height|tend|xbound|
// identities|conc|rec1.
SuiteResult run_suite(const std::string& name, const ExperimentConfig& cfg);
std::vector<std::string> suite_names();

} // namespace hdla::harness
