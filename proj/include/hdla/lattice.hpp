// Vertices, levels and decreasing walks on the Boolean lattice {0,1}^n.
#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "hdla/rng.hpp"

namespace hdla {

using VertexBits = std::uint32_t;

// Dense occupancy arrays need 2^n cells; 2^30 bits = 128 MiB.
inline constexpr int kMaxDimension = 30;

// One vertex of {0,1}^n. Coordinate i is bit i (little-endian, fixed so
// golden-seed replays are portable).
struct VertexMask {
    VertexBits bits = 0;
    int n = 0;

    friend bool operator==(const VertexMask&, const VertexMask&) = default;
};

VertexMask make_vertex(VertexBits bits, int n); // validates bits < 2^n
inline VertexMask all_zeros(int n) { return VertexMask{0, n}; }
inline VertexMask all_ones(int n) {
    return VertexMask{static_cast<VertexBits>((std::uint64_t{1} << n) - 1), n};
}

inline int level(VertexMask v) { return std::popcount(v.bits); }

// Exact C(n,k) for lattice-sized arguments (n <= 34 stays in uint64).
inline std::uint64_t binom_u64(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

// Vertices one set bit below / one clear bit above v.
std::vector<VertexMask> down_neighbors(VertexMask v);
std::vector<VertexMask> up_neighbors(VertexMask v);

// A walk 1 = w_0 > w_1 > ... > w_n = 0 clearing one coordinate per step;
// stored as the order in which coordinates are cleared.
struct DecreasingWalk {
    int n = 0;
    std::vector<std::uint8_t> clear_order; // permutation of {0,...,n-1}

    std::vector<VertexMask> steps() const; // materializes the n+1 vertices
};

// Incrementally samples a uniform decreasing walk from all-ones; callers may
// stop early, paying only for the steps actually taken.
class WalkCursor {
public:
    explicit WalkCursor(int n) : count_(n) {
        cur_ = all_ones(n).bits;
        for (int i = 0; i < n; ++i) remaining_[i] = static_cast<std::uint8_t>(i);
    }

    VertexBits current() const { return cur_; }
    bool at_bottom() const { return count_ == 0; }

    // Clears a uniformly chosen remaining coordinate; returns its index.
    int step(Xoshiro256& rng) {
        const std::uint32_t pick = rng.bounded(static_cast<std::uint32_t>(count_));
        const std::uint8_t coord = remaining_[pick];
        remaining_[pick] = remaining_[--count_];
        cur_ &= ~(VertexBits{1} << coord);
        return coord;
    }

private:
    std::array<std::uint8_t, kMaxDimension> remaining_{};
    int count_;
    VertexBits cur_;
};

// Uniform over all n! decreasing walks.
DecreasingWalk sample_walk(Xoshiro256& rng, int n);

} // namespace hdla
