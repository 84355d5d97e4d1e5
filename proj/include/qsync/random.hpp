#pragma once

#include <cstdint>

namespace qsync {

// Splittable counter-seeded generator. Rounds are simulated by worker
// threads in whatever order the pool schedules them, so every round gets
// its own stream derived from (master seed, round index); results then
// depend only on the seed, not the thread count.
//
// Core generator is xoshiro256** with splitmix64 seeding (public-domain
// reference algorithms). mt19937_64 was rejected: its per-stream init is
// ~300 words of state, too slow to redo 10^7 times.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);

    // Independent child stream; derive(i) != derive(j) streams for i != j.
    RandomSource derive(std::uint64_t tag) const;

    std::uint64_t next_u64();

    // Uniform in [0, 1) with 53 random bits.
    double next_double();

    // Uniform in [lo, hi).
    double next_in(double lo, double hi);

    // Uniform in {0, 1, ..., n-1}, n >= 1. Unbiased (rejection).
    std::uint64_t next_below(std::uint64_t n);

    bool next_bernoulli(double p);

private:
    std::uint64_t s_[4];
    std::uint64_t seed_; // retained so derive() can mix seed and tag
};

} // namespace qsync
