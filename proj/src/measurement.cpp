#include "qsync/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qsync/errors.hpp"

namespace qsync {
namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

void check_lengths(std::size_t qubits, std::size_t angles, const char* who) {
    if (qubits != angles) {
        throw DimensionError(std::string(who) + ": " + std::to_string(angles) +
                             " angles for " + std::to_string(qubits) + " qubits");
    }
}

void check_finite(const MeasurementAngles& angles, const char* who) {
    for (double a : angles.angles) {
        if (!std::isfinite(a)) {
            throw DimensionError(std::string(who) + ": non-finite measurement angle");
        }
    }
}

OutcomeString index_to_outcomes(std::size_t idx, int n) {
    OutcomeString out;
    out.outcomes.resize(n);
    for (int i = 0; i < n; ++i) {
        out.outcomes[i] = ((idx >> (n - 1 - i)) & 1) ? -1 : +1;
    }
    return out;
}

} // namespace

int OutcomeString::product() const {
    int p = 1;
    for (auto x : outcomes) p *= x;
    return p;
}

std::vector<double> outcome_distribution(const PureState& state,
                                         const MeasurementAngles& angles) {
    check_lengths(static_cast<std::size_t>(state.num_qubits),
                  angles.angles.size(), "outcome_distribution");
    check_finite(angles, "outcome_distribution");
    check_normalized(state);

    // Projection onto the product of per-qubit outcome bras
    // <x_i| = (<0| + x_i e^{-i theta_i} <1|)/sqrt(2) is a tensor product of
    // 2x2 maps, so apply it qubit by qubit as a butterfly pass: O(N 2^N).
    const int n = state.num_qubits;
    std::vector<std::complex<double>> work = state.amplitudes;
    for (int i = 0; i < n; ++i) {
        const std::size_t stride = std::size_t{1} << (n - 1 - i);
        const std::complex<double> phase = std::polar(1.0, -angles.angles[i]);
        for (std::size_t base = 0; base < work.size(); base += 2 * stride) {
            for (std::size_t off = 0; off < stride; ++off) {
                const auto a0 = work[base + off];
                const auto a1 = phase * work[base + off + stride];
                work[base + off] = (a0 + a1) * kInvSqrt2;          // outcome +1
                work[base + off + stride] = (a0 - a1) * kInvSqrt2; // outcome -1
            }
        }
    }

    std::vector<double> probs(work.size());
    double total = 0.0;
    for (std::size_t i = 0; i < work.size(); ++i) {
        probs[i] = std::norm(work[i]);
        total += probs[i];
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error("outcome_distribution: probabilities sum to " +
                    std::to_string(total));
    }
    return probs;
}

OutcomeString sample_outcome(const PureState& state,
                             const MeasurementAngles& angles,
                             RandomSource& rng) {
    const auto probs = outcome_distribution(state, angles);
    const double u = rng.next_double();
    double acc = 0.0;
    std::size_t pick = probs.size() - 1; // attribute rounding slack to the tail
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) {
            pick = i;
            break;
        }
    }
    return index_to_outcomes(pick, state.num_qubits);
}

JointOutcomeSampler::JointOutcomeSampler(const PureState& state,
                                         const MeasurementAngles& angles)
    : num_qubits_(state.num_qubits),
      cdf_(outcome_distribution(state, angles)) {
    for (std::size_t i = 1; i < cdf_.size(); ++i) cdf_[i] += cdf_[i - 1];
}

OutcomeString JointOutcomeSampler::draw(RandomSource& rng) const {
    const double u = rng.next_double() * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::size_t idx =
        std::min<std::size_t>(it - cdf_.begin(), cdf_.size() - 1);
    return index_to_outcomes(idx, num_qubits_);
}

OutcomeString sample_ghz_closed_form(const DistributionSequence& seq,
                                     const MeasurementAngles& angles,
                                     RandomSource& rng) {
    const int n = seq.n();
    check_lengths(static_cast<std::size_t>(n), angles.angles.size(),
                  "sample_ghz_closed_form");
    check_finite(angles, "sample_ghz_closed_form");

    double phi = 0.0;
    for (int i = 0; i < n; ++i) {
        phi += seq.flags[i] ? -angles.angles[i] : angles.angles[i];
    }

    const int parity = rng.next_bernoulli((1.0 + std::cos(phi)) / 2.0) ? +1 : -1;

    // Uniform string within the parity class: free bits for the first N-1
    // outcomes, the last one fixes the product.
    OutcomeString out;
    out.outcomes.resize(n);
    int prod = 1;
    std::uint64_t word = 0;
    for (int i = 0; i < n - 1; ++i) {
        if (i % 64 == 0) word = rng.next_u64();
        const int x = (word & 1) ? -1 : +1;
        word >>= 1;
        out.outcomes[i] = static_cast<std::int8_t>(x);
        prod *= x;
    }
    out.outcomes[n - 1] = static_cast<std::int8_t>(prod * parity);
    return out;
}

std::pair<int, int> sample_bell_pair_outcomes(double theta_p, double theta_c,
                                              RandomSource& rng) {
    const double c = std::cos(theta_p - theta_c);
    const int x_p = rng.next_bernoulli(0.5) ? +1 : -1;
    const int x_c = rng.next_bernoulli((1.0 + c) / 2.0) ? x_p : -x_p;
    return {x_p, x_c};
}

double dicke_pair_correlation(int n_parties, double dtheta) {
    if (n_parties < 2 || n_parties % 2 != 0) {
        throw InvalidEnsembleError(
            "dicke_pair_correlation: N must be even and >= 2, got " +
            std::to_string(n_parties));
    }
    const double v = static_cast<double>(n_parties) / (2.0 * (n_parties - 1));
    return v * std::cos(dtheta);
}

std::pair<int, int> sample_dicke_pair(int n_parties, double theta_p,
                                      double theta_i, RandomSource& rng) {
    const double c = dicke_pair_correlation(n_parties, theta_i - theta_p);
    const int x_p = rng.next_bernoulli(0.5) ? +1 : -1;
    const int x_i = rng.next_bernoulli((1.0 + c) / 2.0) ? x_p : -x_p;
    return {x_p, x_i};
}

} // namespace qsync
