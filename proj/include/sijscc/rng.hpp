// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace sijscc {

// splitmix64 finalizer. All randomness in the project is derived from this
// mixer so that every stream is counter-based: a value depends only on
// (seed, stream, index), never on how many values were drawn before it.
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline uint64_t key_at(uint64_t seed, uint64_t stream, uint64_t index) {
    uint64_t k = mix64(seed ^ 0x6A09E667F3BCC909ULL);
    k = mix64(k ^ stream);
    return mix64(k ^ index);
}

// uniform in [0,1) from 53 high bits
inline double u64_to_unit(uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// One complex-Gaussian draw (two independent N(0,1) components) addressed by
// (seed, stream, index). Box-Muller; u1 is kept strictly positive.
inline void gaussian_pair_at(uint64_t seed, uint64_t stream, uint64_t index,
                             double& g0, double& g1) {
    uint64_t a = key_at(seed, stream, 2 * index);
    uint64_t b = key_at(seed, stream, 2 * index + 1);
    double u1 = u64_to_unit(a);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double u2 = u64_to_unit(b);
    double r = std::sqrt(-2.0 * std::log(u1));
    g0 = r * std::cos(2.0 * M_PI * u2);
    g1 = r * std::sin(2.0 * M_PI * u2);
}

// Sequential convenience stream over the same keyed generator. The cursor is
// plain state, so it can be checkpointed and restored exactly.
class Rng {
public:
    Rng() : Rng(0, 0) {}
    Rng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream), cursor_(0) {}

    uint64_t next_u64() { return key_at(seed_, stream_, cursor_++); }
    double next_unit() { return u64_to_unit(next_u64()); }

    // uniform integer in [0, n)
    uint64_t next_below(uint64_t n) {
        // modulo bias is irrelevant at the sizes used here (n << 2^64)
        return n ? next_u64() % n : 0;
    }
    double next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    double next_gaussian() {
        double g0, g1;
        gaussian_pair_at(seed_, stream_, cursor_++, g0, g1);
        return g0;
    }

    uint64_t seed() const { return seed_; }
    uint64_t stream() const { return stream_; }
    uint64_t cursor() const { return cursor_; }
    void set_cursor(uint64_t c) { cursor_ = c; }

private:
    uint64_t seed_;
    uint64_t stream_;
    uint64_t cursor_;
};

} // namespace sijscc
