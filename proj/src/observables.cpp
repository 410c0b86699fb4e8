#include "hdla/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hdla::obs {

double upsilon(const ClusterState& c, VertexMask v) {
    const int k = level(v);
    if (k == 0) throw std::invalid_argument("upsilon undefined for the all-zeros vertex");
    int unoccupied = 0;
    VertexBits rest = v.bits;
    while (rest != 0) {
        const VertexBits low = rest & (~rest + 1);
        if (!c.occupied(static_cast<VertexBits>(v.bits ^ low))) ++unoccupied;
        rest ^= low;
    }
    return static_cast<double>(unoccupied) / static_cast<double>(k);
}

namespace {

std::vector<std::uint8_t> clear_positions(VertexMask v) {
    std::vector<std::uint8_t> out;
    for (int i = 0; i < v.n; ++i)
        if (((v.bits >> i) & 1u) == 0) out.push_back(static_cast<std::uint8_t>(i));
    return out;
}

double phi_exact_dp(const ClusterState& c, VertexMask v) {
    const auto clear = clear_positions(v);
    const int m = static_cast<int>(clear.size());
    if (m == 0) return 0.0; // the empty path holds no vertex besides v
    const std::size_t cells = std::size_t{1} << m;
    // A[mask] = paths from all-ones to (v | spread(mask)) avoiding occupied
    // vertices other than v itself.
    std::vector<double> paths(cells, 0.0);
    auto spread = [&](std::uint32_t mask) {
        VertexBits u = v.bits;
        for (int i = 0; i < m; ++i)
            if ((mask >> i) & 1u) u |= VertexBits{1} << clear[static_cast<std::size_t>(i)];
        return u;
    };
    const std::uint32_t full = static_cast<std::uint32_t>(cells - 1);
    for (std::uint32_t mask = full;; --mask) {
        const VertexBits u = spread(mask);
        if (!(u != v.bits && c.occupied(u))) {
            if (mask == full) {
                paths[mask] = 1.0;
            } else {
                double acc = 0.0;
                for (int i = 0; i < m; ++i)
                    if (((mask >> i) & 1u) == 0)
                        acc += paths[mask | (std::uint32_t{1} << i)];
                paths[mask] = acc;
            }
        }
        if (mask == 0) break;
    }
    double total = 1.0;
    for (int i = 2; i <= m; ++i) total *= i;
    return (total - paths[0]) / total; // same quotient the enumeration forms
}

bool path_hits_cluster(const ClusterState& c, VertexMask v,
                       const std::vector<std::uint8_t>& order) {
    VertexBits u = all_ones(v.n).bits;
    if (c.occupied(u) && u != v.bits) return true;
    for (std::size_t i = 0; i < order.size(); ++i) {
        u &= ~(VertexBits{1} << order[i]);
        if (u == v.bits) break;
        if (c.occupied(u)) return true;
    }
    return false;
}

double phi_brute_force(const ClusterState& c, VertexMask v) {
    auto order = clear_positions(v);
    if (order.empty()) return 0.0;
    std::sort(order.begin(), order.end());
    std::uint64_t hits = 0, total = 0;
    do {
        ++total;
        if (path_hits_cluster(c, v, order)) ++hits;
    } while (std::next_permutation(order.begin(), order.end()));
    return static_cast<double>(hits) / static_cast<double>(total);
}

double phi_monte_carlo(const ClusterState& c, VertexMask v, Xoshiro256& rng,
                       std::uint64_t samples) {
    auto order = clear_positions(v);
    if (order.empty()) return 0.0;
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        // uniform shuffle of the clear coordinates (Fisher-Yates)
        for (std::uint32_t i = static_cast<std::uint32_t>(order.size()); i > 1; --i)
            std::swap(order[i - 1], order[rng.bounded(i)]);
        if (path_hits_cluster(c, v, order)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

} // namespace

PathFraction phi(const ClusterState& c, VertexMask v, PhiMethod method, Xoshiro256* rng,
                 std::uint64_t samples) {
    if (v.n != c.dimension()) throw std::invalid_argument("vertex dimension mismatch");
    const int codim = v.n - level(v);
    PathFraction out;
    out.method = method;
    switch (method) {
        case PhiMethod::exact_dp:
            if (codim > kPhiExactDpMaxCodim)
                throw std::invalid_argument("phi exact_dp limited to codimension <= " +
                                            std::to_string(kPhiExactDpMaxCodim));
            out.value = phi_exact_dp(c, v);
            break;
        case PhiMethod::brute_force:
            if (codim > kPhiBruteForceMaxCodim)
                throw std::invalid_argument("phi brute_force limited to codimension <= " +
                                            std::to_string(kPhiBruteForceMaxCodim));
            out.value = phi_brute_force(c, v);
            break;
        case PhiMethod::monte_carlo:
            if (rng == nullptr) throw std::invalid_argument("phi monte_carlo needs a random source");
            if (samples == 0) throw std::invalid_argument("phi monte_carlo needs samples >= 1");
            out.value = phi_monte_carlo(c, v, *rng, samples);
            out.samples = samples;
            break;
    }
    return out;
}

std::optional<std::uint64_t> first_rho_time(const TrialRecord& r, int k, double rho) {
    if (k < 0 || k > r.n) throw std::invalid_argument("level out of range");
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in (0,1]");
    for (const auto& cr : r.rho_crossings)
        if (cr.k == k && cr.rho == rho) return cr.t;
    const auto threshold = static_cast<std::uint64_t>(
        std::ceil(rho * static_cast<double>(binom_u64(r.n, k))));
    for (const auto& snap : r.snapshots)
        if (snap.level_counts[static_cast<std::size_t>(k)] >= threshold) return snap.t;
    return std::nullopt;
}

int height(const std::vector<std::uint64_t>& level_counts) {
    for (int k = static_cast<int>(level_counts.size()) - 1; k >= 0; --k)
        if (level_counts[static_cast<std::size_t>(k)] > 0) return k;
    return 0;
}

int height(const ClusterState& c) { return height(c.level_counts()); }

int isolated_path_length(const ClusterState& c) {
    if (!c.terminated())
        throw std::invalid_argument("isolated_path_length requires a terminated cluster");
    const int n = c.dimension();
    VertexMask cur = all_ones(n);
    int len = 1;
    for (int lev = n; lev >= 2; --lev) { // level 0 is the origin, never "isolated"
        if (c.level_counts()[static_cast<std::size_t>(lev - 1)] != 1) break;
        VertexMask next{};
        int occupied_below = 0;
        for (const auto& d : down_neighbors(cur)) {
            if (c.occupied(d)) {
                ++occupied_below;
                next = d;
            }
        }
        if (occupied_below != 1) break; // unique level occupant is not adjacent
        ++len;
        cur = next;
    }
    return len;
}

std::vector<double> zeta_log_thresholds(const theory::TheoryContext& ctx) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(ctx.j0));
    for (int j = 0; j < ctx.j0; ++j) out.push_back(theory::zeta(j, ctx).log_value());
    return out;
}

std::optional<Tau0Result> run_until_tau0(ClusterState& c, Xoshiro256& rng,
                                         const theory::TheoryContext& ctx,
                                         std::uint64_t budget) {
    if (ctx.n != c.dimension()) throw std::invalid_argument("context dimension mismatch");
    const auto thresholds = zeta_log_thresholds(ctx);
    const int k = static_cast<int>(ctx.k);
    // levels k+j with j > ell do not exist, so only j <= min(j0-1, ell) can trip
    const int j_watch = static_cast<int>(std::min<std::int64_t>(ctx.j0 - 1, ctx.ell));
    if (budget == 0) budget = (std::uint64_t{1} << c.dimension()) - 1;

    auto satisfied = [&](int j) {
        const std::uint64_t count = c.level_counts()[static_cast<std::size_t>(k + j)];
        return count > 0 &&
               std::log(static_cast<double>(count)) >= thresholds[static_cast<std::size_t>(j)];
    };
    for (int j = 0; j <= j_watch; ++j)
        if (satisfied(j)) return Tau0Result{c.steps(), j};

    for (std::uint64_t sent = 0; sent < budget && !c.terminated(); ++sent) {
        const auto out = c.deposit(rng);
        const int lv = level(out.vertex);
        if (lv >= k && lv - k <= j_watch && satisfied(lv - k)) {
            int jstar = lv - k;
            for (int j = 0; j < jstar; ++j)
                if (satisfied(j)) jstar = j; // minimal offset at this step
            return Tau0Result{c.steps(), jstar};
        }
    }
    return std::nullopt;
}

std::vector<SeriesPoint> xy_series(const TrialRecord& r, const theory::TheoryContext& ctx,
                                   std::uint64_t tau0, int jstar,
                                   const std::vector<std::uint64_t>& checkpoints) {
    if (ctx.n != r.n) throw std::invalid_argument("context dimension mismatch");
    const int k = static_cast<int>(ctx.k);
    const int jmax = static_cast<int>(ctx.ell);
    std::vector<SeriesPoint> out;
    out.reserve(checkpoints.size() * static_cast<std::size_t>(jmax + 1));
    for (const std::uint64_t t : checkpoints) {
        const std::uint64_t abs_t = tau0 + t;
        const auto it = std::lower_bound(
            r.snapshots.begin(), r.snapshots.end(), abs_t,
            [](const LevelSnapshot& s, std::uint64_t v) { return s.t < v; });
        if (it == r.snapshots.end() || it->t != abs_t)
            throw std::invalid_argument("missing checkpoint at t = tau0 + " + std::to_string(t));
        const auto& lc = it->level_counts;
        const std::uint64_t theta_sq = it->theta * it->theta;
        std::vector<std::uint64_t> x(static_cast<std::size_t>(jmax + 1));
        for (int j = 0; j <= jmax; ++j) x[static_cast<std::size_t>(j)] = lc[static_cast<std::size_t>(k + j)];
        for (int j = 0; j <= jmax; ++j) {
            SeriesPoint p;
            p.j = j;
            p.t = t;
            p.x = x[static_cast<std::size_t>(j)];
            std::uint64_t tail = 0;
            for (int rr = jstar + j; rr <= jmax; ++rr) tail += x[static_cast<std::size_t>(rr)];
            p.y = theta_sq + tail;
            out.push_back(p);
        }
    }
    return out;
}

} // namespace hdla::obs
