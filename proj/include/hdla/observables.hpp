// Per-vertex and per-level statistics over an evolving cluster: path
// fractions, down-neighbor vacancy, hitting times, the stopping time tau0
// and the extended-process series.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hdla/dla.hpp"
#include "hdla/theory.hpp"

namespace hdla::obs {

// Fraction of v's down-neighbors unoccupied at the current time.
// Errors on v = all-zeros (no down-neighbors).
double upsilon(const ClusterState& c, VertexMask v);

enum class PhiMethod { exact_dp, brute_force, monte_carlo };

struct PathFraction {
    double value = 0;
    PhiMethod method = PhiMethod::exact_dp;
    std::uint64_t samples = 0; // monte_carlo only
};

inline constexpr int kPhiBruteForceMaxCodim = 8;
inline constexpr int kPhiExactDpMaxCodim = 25;

// Fraction of the (n-k)! monotone paths from all-ones to v that contain an
// occupied vertex other than v. exact_dp runs a downward DP over the upset
// of v; brute_force enumerates permutations; monte_carlo samples paths.
PathFraction phi(const ClusterState& c, VertexMask v, PhiMethod method,
                 Xoshiro256* rng = nullptr, std::uint64_t samples = 100000);

// Least recorded t with |L_k ∩ C_t| >= rho * C(n,k); reads exact crossing
// entries when the record carries them, otherwise brackets via snapshots.
std::optional<std::uint64_t> first_rho_time(const TrialRecord& r, int k, double rho);

// Max k with level_counts[k] > 0.
int height(const ClusterState& c);
int height(const std::vector<std::uint64_t>& level_counts);

// Number of consecutive top levels (from n downward) holding exactly one
// occupied vertex each, verified to form a path. Requires termination.
int isolated_path_length(const ClusterState& c);

struct Tau0Result {
    std::uint64_t tau0 = 0;
    int jstar = 0;
};

// Log-space zeta thresholds for 0 <= j < j0 used by the stopping rule.
std::vector<double> zeta_log_thresholds(const theory::TheoryContext& ctx);

// Runs deposits until some 0 <= j* < j0 first satisfies
// |O_{k+j*}| >= zeta(j*, mu0); comparison is log(count) >= log zeta with
// exact integer counts. Returns the step and the minimal such j*, or absent
// if the budget (default: the full 2^n - 1 deposits) is exhausted.
std::optional<Tau0Result> run_until_tau0(ClusterState& c, Xoshiro256& rng,
                                         const theory::TheoryContext& ctx,
                                         std::uint64_t budget = 0);

struct SeriesPoint {
    int j = 0;
    std::uint64_t t = 0; // steps since tau0
    std::uint64_t x = 0; // X_{j,t} = |O_{k+j, tau0+t}|
    std::uint64_t y = 0; // Y_{j,t} = Theta^2 + sum_{r >= jstar+j} X_{r,t}
};

// Builds X/Y series from a record whose snapshots cover tau0 + t for every
// requested checkpoint t; errors naming the first missing time.
std::vector<SeriesPoint> xy_series(const TrialRecord& r, const theory::TheoryContext& ctx,
                                   std::uint64_t tau0, int jstar,
                                   const std::vector<std::uint64_t>& checkpoints);

} // namespace hdla::obs
