#pragma once

#include <cmath>
#include <cstdint>

namespace rayfuse {

// PCG32 (O'Neill, pcg-random.org). Chosen over <random> engines because the
// exact output sequence is part of the reproducibility contract: the same
// seed and stream must give the same draws on every platform and compiler.
class Pcg32 {
public:
    Pcg32() : Pcg32(0, 0) {}

    Pcg32(std::uint64_t seed, std::uint64_t stream) {
        state_ = 0;
        inc_ = (stream << 1u) | 1u;
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    // Unbiased integer in [0, bound); bound = 0 yields 0.
    std::uint32_t next_below(std::uint32_t bound) {
        if (bound == 0) return 0;
        const std::uint32_t threshold = (0u - bound) % bound;
        for (;;) {
            const std::uint32_t r = next_u32();
            if (r >= threshold) return r % bound;
        }
    }

    // Signed integer in [lo, hi] inclusive.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
        if (hi <= lo) return lo;
        const auto span = static_cast<std::uint32_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(next_below(span));
    }

    // Uniform double in [0, 1).
    double uniform() { return next_u32() * (1.0 / 4294967296.0); }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller. Always consumes exactly two 32-bit
    // draws, so the stream position is independent of the values produced.
    double gaussian() {
        const double u1 = (next_u32() + 0.5) * (1.0 / 4294967296.0);
        const double u2 = next_u32() * (1.0 / 4294967296.0);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double gaussian(double mean, double sigma) { return mean + sigma * gaussian(); }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

}  // namespace rayfuse
