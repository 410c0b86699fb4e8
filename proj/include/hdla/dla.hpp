// The aggregation process: cluster state, the deposit rule, termination,
// and the extended process past termination.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hdla/lattice.hpp"
#include "hdla/rng.hpp"

namespace hdla {

struct DepositOutcome {
    enum class Kind { deposited, overflow };
    Kind kind = Kind::deposited;
    VertexMask vertex{}; // valid when kind == deposited
};

// Occupancy of all 2^n vertices plus per-level counts. C_0 = {0}.
class ClusterState {
public:
    explicit ClusterState(int n); // throws if n outside [1, kMaxDimension]

    int dimension() const { return n_; }

    bool occupied(VertexBits v) const {
        return (words_[v >> 6] >> (v & 63)) & 1u;
    }
    bool occupied(VertexMask v) const { return occupied(v.bits); }

    std::uint64_t occupied_count() const { return occupied_count_; }
    const std::vector<std::uint64_t>& level_counts() const { return level_counts_; }
    std::uint64_t steps() const { return t_; } // particles sent so far (t)
    std::optional<std::uint64_t> terminated_at() const { return terminated_at_; }
    bool terminated() const { return terminated_at_.has_value(); }
    std::uint64_t theta() const { return theta_; } // particles stuck past T_end

    // Sends one particle down a lazily sampled uniform decreasing walk and
    // occupies the last vertex before the walk's first occupied vertex.
    // Once all-ones is occupied the outcome is forced: theta increments and
    // no walk is sampled.
    DepositOutcome deposit(Xoshiro256& rng);

    // Same rule applied to an explicitly given walk (test/oracle path).
    DepositOutcome deposit_walk(const DecreasingWalk& walk);

private:
    void commit(VertexBits v);
    void commit_origin_();

    int n_;
    VertexBits top_;
    std::vector<std::uint64_t> words_;
    std::vector<std::uint64_t> level_counts_;
    std::uint64_t t_ = 0;
    std::uint64_t occupied_count_ = 0;
    std::uint64_t theta_ = 0;
    std::optional<std::uint64_t> terminated_at_;
};

struct StopRule {
    enum class Kind { until_termination, step_budget, extended_until };
    Kind kind = Kind::until_termination;
    std::uint64_t limit = 0;

    static StopRule until_termination() { return {Kind::until_termination, 0}; }
    // Stop once `budget` further particles have been sent (or on termination).
    static StopRule step_budget(std::uint64_t budget) { return {Kind::step_budget, budget}; }
    // Keep sending particles (overflow included) until the step counter
    // reaches `total`.
    static StopRule extended_until(std::uint64_t total) { return {Kind::extended_until, total}; }
};

struct LevelSnapshot {
    std::uint64_t t = 0;
    std::vector<std::uint64_t> level_counts;
    std::uint64_t theta = 0;
};

struct RhoTarget {
    int k = 0;
    double rho = 1.0;
};

struct RhoCrossing {
    int k = 0;
    double rho = 1.0;
    std::uint64_t threshold = 0;
    std::optional<std::uint64_t> t;
};

struct RunSpec {
    StopRule stop;
    std::vector<std::uint64_t> checkpoints; // absolute times, ascending
    std::vector<RhoTarget> rho_targets;
};

struct TrialRecord {
    int n = 0;
    std::vector<std::uint64_t> final_level_counts;
    std::optional<std::uint64_t> t_end;
    std::uint64_t theta = 0;
    std::uint64_t steps = 0;
    std::vector<LevelSnapshot> snapshots;
    std::vector<RhoCrossing> rho_crossings;
};

// Repeatedly deposits until the stop rule fires. May be called on a cluster
// that has already run; it continues from the current state.
TrialRecord run(ClusterState& c, Xoshiro256& rng, const RunSpec& spec);

// T_end = |C_{T_end}| - 1; absent if the record never terminated.
std::optional<std::uint64_t> t_end(const TrialRecord& r);

} // namespace hdla
