#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qsync/pure_state.hpp"
#include "qsync/random.hpp"

namespace qsync {

// Local measurement phases theta_i = omega*(tau0 + t_i) plus any
// quadrature shift. Party i measures the observable with eigenstates
// (|0> + x e^{i theta_i} |1>)/sqrt(2), x = +-1.
struct MeasurementAngles {
    std::vector<double> angles;
};

struct OutcomeString {
    std::vector<std::int8_t> outcomes; // entries +1 or -1

    int product() const;
};

// Exact joint probability of every outcome string. Table index uses bit 0
// for outcome +1 and bit 1 for -1, qubit 0 most significant (same layout
// as PureState). O(N 2^N) via a tensor-product butterfly.
std::vector<double> outcome_distribution(const PureState& state,
                                         const MeasurementAngles& angles);

// One draw from outcome_distribution's law. Rebuilds the table per call;
// use JointOutcomeSampler for repeated draws at fixed angles.
OutcomeString sample_outcome(const PureState& state,
                             const MeasurementAngles& angles,
                             RandomSource& rng);

// CDF inversion sampler over a fixed (state, angles) pair.
class JointOutcomeSampler {
public:
    JointOutcomeSampler(const PureState& state, const MeasurementAngles& angles);

    OutcomeString draw(RandomSource& rng) const;
    int num_qubits() const { return num_qubits_; }

private:
    int num_qubits_;
    std::vector<double> cdf_;
};

// Parity-law sampler, valid for any N: the outcome product is +1 with
// probability (1 + cos phi)/2, phi = sum_i (-1)^{f_i} theta_i, and the
// string is uniform among the 2^{N-1} strings of that parity.
OutcomeString sample_ghz_closed_form(const DistributionSequence& seq,
                                     const MeasurementAngles& angles,
                                     RandomSource& rng);

// P(x_p, x_c) = (1/4)(1 + x_p x_c cos(theta_p - theta_c)): uniform
// marginals, product expectation cos(theta_p - theta_c).
std::pair<int, int> sample_bell_pair_outcomes(double theta_p, double theta_c,
                                              RandomSource& rng);

// Two-qubit product expectation of the half-excited Dicke state:
// N/(2(N-1)) * cos(dtheta). The reduced pair state is the same for every
// qubit pair by permutation symmetry.
double dicke_pair_correlation(int n_parties, double dtheta);

// Marginal pair sampler with the Dicke visibility. Single-qubit means
// vanish (the one-qubit reduced state is maximally mixed), so the law is
// P(x_p, x_i) = (1/4)(1 + x_p x_i * dicke_pair_correlation(N, dtheta)).
// Preserves per-pair statistics but not cross-pair correlations.
std::pair<int, int> sample_dicke_pair(int n_parties, double theta_p,
                                      double theta_i, RandomSource& rng);

} // namespace qsync
