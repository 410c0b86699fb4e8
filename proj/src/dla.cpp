#include "hdla/dla.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hdla {

ClusterState::ClusterState(int n) {
    if (n < 1 || n > kMaxDimension)
        throw std::invalid_argument("dimension out of range [1," +
                                    std::to_string(kMaxDimension) + "]: " + std::to_string(n));
    n_ = n;
    top_ = all_ones(n).bits;
    words_.assign((std::size_t{1} << n) / 64 + 1, 0);
    level_counts_.assign(static_cast<std::size_t>(n) + 1, 0);
    commit_origin_();
}

void ClusterState::commit_origin_() {
    words_[0] |= 1u;
    level_counts_[0] = 1;
    occupied_count_ = 1;
}

void ClusterState::commit(VertexBits v) {
    words_[v >> 6] |= std::uint64_t{1} << (v & 63);
    ++level_counts_[static_cast<std::size_t>(std::popcount(v))];
    ++occupied_count_;
    ++t_;
    if (v == top_) terminated_at_ = t_;
    assert(terminated() ? occupied_count_ == *terminated_at_ + 1
                        : occupied_count_ == t_ + 1);
}

DepositOutcome ClusterState::deposit(Xoshiro256& rng) {
    if (terminated()) {
        ++t_;
        ++theta_;
        return DepositOutcome{DepositOutcome::Kind::overflow, {}};
    }
    WalkCursor cursor(n_);
    VertexBits prev = cursor.current(); // all-ones, unoccupied here
    VertexBits cur = prev;
    while (!occupied(cur)) {
        prev = cur;
        cursor.step(rng);
        cur = cursor.current();
    }
    commit(prev);
    return DepositOutcome{DepositOutcome::Kind::deposited, VertexMask{prev, n_}};
}

DepositOutcome ClusterState::deposit_walk(const DecreasingWalk& walk) {
    if (walk.n != n_) throw std::invalid_argument("walk dimension mismatch");
    if (terminated()) {
        ++t_;
        ++theta_;
        return DepositOutcome{DepositOutcome::Kind::overflow, {}};
    }
    VertexBits prev = top_;
    VertexBits cur = prev;
    std::size_t i = 0;
    while (!occupied(cur)) {
        prev = cur;
        cur &= ~(VertexBits{1} << walk.clear_order[i++]);
    }
    commit(prev);
    return DepositOutcome{DepositOutcome::Kind::deposited, VertexMask{prev, n_}};
}

namespace {

struct RhoWatch {
    RhoCrossing crossing;
    bool pending = true;
};

} // namespace

TrialRecord run(ClusterState& c, Xoshiro256& rng, const RunSpec& spec) {
    const int n = c.dimension();
    TrialRecord rec;
    rec.n = n;

    std::vector<RhoWatch> watches;
    watches.reserve(spec.rho_targets.size());
    for (const auto& tgt : spec.rho_targets) {
        if (tgt.k < 0 || tgt.k > n) throw std::invalid_argument("rho target level out of range");
        if (!(tgt.rho > 0.0 && tgt.rho <= 1.0)) throw std::invalid_argument("rho must lie in (0,1]");
        RhoWatch w;
        w.crossing.k = tgt.k;
        w.crossing.rho = tgt.rho;
        w.crossing.threshold = static_cast<std::uint64_t>(
            std::ceil(tgt.rho * static_cast<double>(binom_u64(n, tgt.k))));
        if (c.level_counts()[static_cast<std::size_t>(tgt.k)] >= w.crossing.threshold) {
            w.crossing.t = c.steps();
            w.pending = false;
        }
        watches.push_back(std::move(w));
    }

    std::size_t cp = 0;
    auto snapshot = [&] {
        rec.snapshots.push_back(LevelSnapshot{c.steps(), c.level_counts(), c.theta()});
    };
    while (cp < spec.checkpoints.size() && spec.checkpoints[cp] <= c.steps()) {
        if (spec.checkpoints[cp] == c.steps()) snapshot();
        ++cp;
    }

    std::uint64_t sent = 0;
    auto should_stop = [&] {
        switch (spec.stop.kind) {
            case StopRule::Kind::until_termination: return c.terminated();
            case StopRule::Kind::step_budget: return sent >= spec.stop.limit || c.terminated();
            case StopRule::Kind::extended_until: return c.steps() >= spec.stop.limit;
        }
        return true;
    };

    while (!should_stop()) {
        const DepositOutcome out = c.deposit(rng);
        ++sent;
        if (out.kind == DepositOutcome::Kind::deposited) {
            const int k = level(out.vertex);
            for (auto& w : watches) {
                if (w.pending && w.crossing.k == k &&
                    c.level_counts()[static_cast<std::size_t>(k)] >= w.crossing.threshold) {
                    w.crossing.t = c.steps();
                    w.pending = false;
                }
            }
        }
        if (cp < spec.checkpoints.size() && spec.checkpoints[cp] == c.steps()) {
            snapshot();
            ++cp;
        }
    }

    rec.final_level_counts = c.level_counts();
    rec.t_end = c.terminated_at();
    rec.theta = c.theta();
    rec.steps = c.steps();
    for (auto& w : watches) rec.rho_crossings.push_back(w.crossing);
    return rec;
}

std::optional<std::uint64_t> t_end(const TrialRecord& r) { return r.t_end; }

} // namespace hdla
