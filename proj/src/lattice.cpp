#include "hdla/lattice.hpp"

#include <stdexcept>
#include <string>

namespace hdla {

VertexMask make_vertex(VertexBits bits, int n) {
    if (n < 1 || n > kMaxDimension)
        throw std::invalid_argument("dimension out of range [1," +
                                    std::to_string(kMaxDimension) + "]: " + std::to_string(n));
    if (n < 32 && (bits >> n) != 0)
        throw std::invalid_argument("vertex bits exceed dimension");
    return VertexMask{bits, n};
}

std::vector<VertexMask> down_neighbors(VertexMask v) {
    std::vector<VertexMask> out;
    out.reserve(static_cast<std::size_t>(level(v)));
    VertexBits rest = v.bits;
    while (rest != 0) {
        const VertexBits low = rest & (~rest + 1);
        out.push_back(VertexMask{static_cast<VertexBits>(v.bits ^ low), v.n});
        rest ^= low;
    }
    return out;
}

std::vector<VertexMask> up_neighbors(VertexMask v) {
    std::vector<VertexMask> out;
    out.reserve(static_cast<std::size_t>(v.n - level(v)));
    VertexBits rest = all_ones(v.n).bits & ~v.bits;
    while (rest != 0) {
        const VertexBits low = rest & (~rest + 1);
        out.push_back(VertexMask{static_cast<VertexBits>(v.bits | low), v.n});
        rest ^= low;
    }
    return out;
}

std::vector<VertexMask> DecreasingWalk::steps() const {
    std::vector<VertexMask> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    VertexBits cur = all_ones(n).bits;
    out.push_back(VertexMask{cur, n});
    for (std::uint8_t coord : clear_order) {
        cur &= ~(VertexBits{1} << coord);
        out.push_back(VertexMask{cur, n});
    }
    return out;
}

DecreasingWalk sample_walk(Xoshiro256& rng, int n) {
    if (n < 1 || n > kMaxDimension)
        throw std::invalid_argument("dimension out of range: " + std::to_string(n));
    DecreasingWalk walk;
    walk.n = n;
    walk.clear_order.reserve(static_cast<std::size_t>(n));
    WalkCursor cursor(n);
    while (!cursor.at_bottom())
        walk.clear_order.push_back(static_cast<std::uint8_t>(cursor.step(rng)));
    return walk;
}

} // namespace hdla
