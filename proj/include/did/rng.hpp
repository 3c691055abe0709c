/**
 * Seeded PRNG utilities for deterministic Monte Carlo runs.
 *
 * Everything here is a pure function of its seed so that simulations are
 * bit-reproducible across runs, thread counts, and platforms. Standard
 * library distributions are deliberately avoided: their output is
 * implementation-defined, which would break byte-identical reports.
 */

#pragma once

#include <cstdint>

namespace did {

/// SplitMix64 step. Used both as a stand-alone mixer and to seed Xoshiro.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stateless mix of a single value (SplitMix64 finalizer).
inline std::uint64_t mix64(std::uint64_t x) {
    std::uint64_t s = x;
    return splitmix64(s);
}

/// Per-trial seed derivation: trial i's seed is a pure function of
/// (master_seed, i), so trial outcomes do not depend on execution order.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
    return mix64(master_seed ^ mix64(trial_index + 0x51ED2701FB55EE68ULL));
}

/// xoshiro256** — small, fast, and fully deterministic across platforms.
class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed = 0) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
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

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Bernoulli trial: true with probability p.
    bool bernoulli(double p) {
        return uniform01() < p;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
};

} // namespace did
