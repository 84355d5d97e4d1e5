#include "qsync/random.hpp"

namespace qsync {
namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
}

} // namespace

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
    // all-zero state is the one forbidden xoshiro state; splitmix64 never
    // emits four zeros in a row, but keep the guard explicit
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

RandomSource RandomSource::derive(std::uint64_t tag) const {
    // feed the tag through splitmix so derive(0), derive(1), ... land far
    // apart even for adjacent tags
    std::uint64_t x = seed_ ^ 0xa0761d6478bd642fULL;
    std::uint64_t mixed = splitmix64(x) ^ tag;
    std::uint64_t y = mixed;
    return RandomSource(splitmix64(y));
}

std::uint64_t RandomSource::next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RandomSource::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::next_in(double lo, double hi) {
    return lo + (hi - lo) * next_double();
}

std::uint64_t RandomSource::next_below(std::uint64_t n) {
    // Lemire-style rejection: accept unless the 128-bit product falls in
    // the biased low fringe.
    const std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (lo < threshold) {
            m = static_cast<__uint128_t>(next_u64()) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

bool RandomSource::next_bernoulli(double p) {
    return next_double() < p;
}

} // namespace qsync
