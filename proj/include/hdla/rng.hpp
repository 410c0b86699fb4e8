// Deterministic random streams for reproducible trials.
// xoshiro256** with splitmix64 seeding; no std:: distributions so that
// replays are bit-identical across platforms and standard libraries.
#pragma once

#include <array>
#include <cstdint>

namespace hdla {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Xoshiro256 {
public:
    Xoshiro256() : Xoshiro256(0) {}

    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    // Independent stream for trial `index` under one master seed.
    static Xoshiro256 for_trial(std::uint64_t master_seed, std::uint64_t index) {
        std::uint64_t sm = index;
        return Xoshiro256(master_seed ^ splitmix64(sm));
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Unbiased integer in [0, bound) via mask-and-reject.
    std::uint32_t bounded(std::uint32_t bound) {
        if (bound <= 1) return 0;
        std::uint32_t mask = bound - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        for (;;) {
            const auto v = static_cast<std::uint32_t>(next() >> 32) & mask;
            if (v < bound) return v;
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

} // namespace hdla
