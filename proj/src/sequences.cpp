#include "qsync/sequences.hpp"

#include <algorithm>
#include <string>

#include "qsync/errors.hpp"

namespace qsync {

std::uint64_t binomial(int n, int k) {
    if (n < 0 || k < 0 || k > n) {
        throw Error("binomial: need 0 <= k <= n, got n=" + std::to_string(n) +
                    " k=" + std::to_string(k));
    }
    if (n > 64) {
        // C(65, 32) already exceeds 64 bits; callers never need more.
        throw Error("binomial: n > 64 overflows 64 bits");
    }
    k = std::min(k, n - k);
    __uint128_t result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (result > UINT64_MAX) throw Error("binomial: 64-bit overflow");
    }
    return static_cast<std::uint64_t>(result);
}

std::vector<DistributionSequence> enumerate_sequences(int n_parties,
                                                      std::uint64_t cap) {
    if (n_parties < 2 || n_parties % 2 != 0) {
        throw InvalidEnsembleError(
            "enumerate_sequences: N must be even and >= 2, got " +
            std::to_string(n_parties));
    }
    const std::uint64_t total = binomial(n_parties, n_parties / 2);
    if (total > cap) {
        throw CapacityError("enumerate_sequences: C(" + std::to_string(n_parties) +
                            ", " + std::to_string(n_parties / 2) + ") = " +
                            std::to_string(total) + " exceeds the cap of " +
                            std::to_string(cap));
    }

    std::vector<DistributionSequence> out;
    out.reserve(total);
    std::vector<std::uint8_t> flags(n_parties, 0);
    std::fill(flags.begin() + n_parties / 2, flags.end(), 1);
    // 0...01...1 is the lexicographic minimum; next_permutation walks the
    // rest in order.
    std::size_t rank = 0;
    do {
        out.push_back({flags, rank++});
    } while (std::next_permutation(flags.begin(), flags.end()));
    return out;
}

double signed_time_sum(const DistributionSequence& seq,
                       const std::vector<double>& times) {
    if (seq.flags.size() != times.size()) {
        throw DimensionError("signed_time_sum: " + std::to_string(seq.flags.size()) +
                             " flags vs " + std::to_string(times.size()) + " times");
    }
    double t = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        t += seq.flags[i] ? -times[i] : times[i];
    }
    return t;
}

} // namespace qsync
