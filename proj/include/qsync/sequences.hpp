#pragma once

#include <cstdint>
#include <vector>

namespace qsync {

inline constexpr std::uint64_t kDefaultSequenceCap = 1'000'000;

// One balanced flipped/unflipped assignment for a round: flags[i] == 1
// means party i holds a qubit from the flipped group. Exactly N/2 ones.
struct DistributionSequence {
    std::vector<std::uint8_t> flags;
    std::size_t index = 0; // lexicographic rank among balanced sequences

    int n() const { return static_cast<int>(flags.size()); }
};

// Exact C(n, k) for 0 <= k <= n <= 64; throws on overflow of 64 bits.
std::uint64_t binomial(int n, int k);

// All C(N, N/2) balanced sequences in lexicographic order, index = rank.
// Refuses odd N and enumerations larger than cap.
std::vector<DistributionSequence> enumerate_sequences(
    int n_parties, std::uint64_t cap = kDefaultSequenceCap);

// T_j = sum_i (-1)^{f_i} t_i.
double signed_time_sum(const DistributionSequence& seq,
                       const std::vector<double>& times);

} // namespace qsync
