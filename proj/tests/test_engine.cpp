#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "qsync/accumulator.hpp"
#include "qsync/errors.hpp"
#include "qsync/measurement.hpp"
#include "qsync/pure_state.hpp"
#include "qsync/random.hpp"
#include "qsync/sequences.hpp"
#include "test_support.hpp"

using namespace qsync;

namespace {

// small non-symmetric 3-qubit state exercising complex phases
PureState scratch_state() {
    PureState state;
    state.num_qubits = 3;
    state.amplitudes = {
        {0.2, 0.1},  {0.0, 0.0},   {-0.3, 0.4}, {0.1, -0.2},
        {0.5, 0.0},  {0.05, 0.35}, {0.0, -0.4}, {0.25, 0.15},
    };
    double norm = std::sqrt(state_norm_sq(state));
    for (auto& a : state.amplitudes) a /= norm;
    return state;
}

} // namespace

TEST_CASE("random source reproduces streams from the seed") {
    RandomSource a(42), b(42), other(43);
    bool all_equal = true;
    bool any_diff = false;
    for (int i = 0; i < 200; ++i) {
        const auto va = a.next_u64();
        all_equal = all_equal && va == b.next_u64();
        any_diff = any_diff || va != other.next_u64();
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("derived streams are stable, distinct, and leave the parent alone") {
    const RandomSource parent(7);
    RandomSource c1 = parent.derive(5);
    RandomSource c2 = parent.derive(5);
    RandomSource c3 = parent.derive(6);
    bool repeatable = true;
    bool distinct = false;
    for (int i = 0; i < 100; ++i) {
        const auto v = c1.next_u64();
        repeatable = repeatable && v == c2.next_u64();
        distinct = distinct || v != c3.next_u64();
    }
    CHECK(repeatable);
    CHECK(distinct);

    RandomSource p1(99), p2(99);
    (void)p1.derive(3);
    (void)p1.derive(4);
    CHECK(p1.next_u64() == p2.next_u64());

    // nested derivation (trial -> round -> party) stays reproducible
    RandomSource g1 = RandomSource(11).derive(2).derive(9);
    RandomSource g2 = RandomSource(11).derive(2).derive(9);
    CHECK(g1.next_u64() == g2.next_u64());
}

TEST_CASE("floating draws respect their intervals") {
    RandomSource rng(123);
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.next_double();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / 20000 - 0.5) < 0.01); // sigma ~ 0.002

    for (int i = 0; i < 1000; ++i) {
        const double v = rng.next_in(-2.5, 1.5);
        REQUIRE(v >= -2.5);
        REQUIRE(v < 1.5);
    }
}

TEST_CASE("bounded integer draws are unbiased") {
    RandomSource rng(2024);
    std::vector<std::int64_t> counts(16, 0);
    for (int i = 0; i < 32000; ++i) ++counts[rng.next_below(16)];
    const std::vector<double> uniform(16, 1.0 / 16);
    CHECK(qtest::chi_square_stat(counts, uniform) <
          qtest::chi_square_critical(15));

    for (int i = 0; i < 50; ++i) CHECK(rng.next_below(1) == 0);
    for (int i = 0; i < 1000; ++i) CHECK(rng.next_below(7) < 7);
}

TEST_CASE("bernoulli draws track p") {
    RandomSource rng(5);
    for (int i = 0; i < 100; ++i) {
        CHECK_FALSE(rng.next_bernoulli(0.0));
        CHECK(rng.next_bernoulli(1.0));
    }
    int hits = 0;
    const int k = 40000;
    for (int i = 0; i < k; ++i) hits += rng.next_bernoulli(0.3) ? 1 : 0;
    // 4 sigma band, sigma = sqrt(p(1-p)/k)
    CHECK(std::abs(hits / double(k) - 0.3) < 4 * std::sqrt(0.3 * 0.7 / k));
}

TEST_CASE("binomial matches Pascal's triangle and guards its range") {
    for (int n = 0; n <= 20; ++n) {
        for (int k = 0; k <= n; ++k) {
            CHECK(binomial(n, k) == qtest::pascal_binomial(n, k));
        }
    }
    CHECK(binomial(64, 32) == 1832624140942590534ull);
    CHECK(binomial(6, 3) == 20);
    CHECK_THROWS_AS(binomial(10, 11), Error);
    CHECK_THROWS_AS(binomial(-1, 0), Error);
    CHECK_THROWS_AS(binomial(65, 32), Error);
}

TEST_CASE("balanced sequence enumeration is complete, ordered and ranked") {
    for (int n : {2, 4, 6, 8}) {
        const auto seqs = enumerate_sequences(n);
        const auto expected = qtest::balanced_strings(n);
        REQUIRE(seqs.size() == expected.size());
        REQUIRE(seqs.size() == qtest::pascal_binomial(n, n / 2));
        for (std::size_t j = 0; j < seqs.size(); ++j) {
            CHECK(seqs[j].flags == expected[j]);
            CHECK(seqs[j].index == j);
        }
    }
    const auto two = enumerate_sequences(2);
    CHECK(two[0].flags == std::vector<std::uint8_t>{0, 1});
    CHECK(two[1].flags == std::vector<std::uint8_t>{1, 0});

    CHECK_THROWS_AS(enumerate_sequences(3), InvalidEnsembleError);
    CHECK_THROWS_AS(enumerate_sequences(0), InvalidEnsembleError);
    CHECK_THROWS_AS(enumerate_sequences(24), CapacityError); // C(24,12) > 1e6
}

TEST_CASE("signed time sum applies the flag signs") {
    DistributionSequence seq{{0, 1, 1, 0}, 0};
    CHECK(signed_time_sum(seq, {1.0, 2.0, 3.0, 4.0}) == doctest::Approx(0.0));
    DistributionSequence low{{0, 0, 1, 1}, 0};
    CHECK(signed_time_sum(low, {0.1, 0.2, 0.3, 0.4}) ==
          doctest::Approx(-0.4));
    CHECK_THROWS_AS(signed_time_sum(seq, {1.0, 2.0}), DimensionError);
}

TEST_CASE("entangled states have the right amplitudes") {
    const auto ghz = build_ghz_state({{0, 1}, 0});
    REQUIRE(ghz.amplitudes.size() == 4);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(ghz.amplitudes[1] - std::complex<double>(r)) < 1e-15);
    CHECK(std::abs(ghz.amplitudes[2] - std::complex<double>(r)) < 1e-15);
    CHECK(std::abs(ghz.amplitudes[0]) == 0.0);
    CHECK(std::abs(ghz.amplitudes[3]) == 0.0);

    // complementary flag strings build the same state
    const auto flipped = build_ghz_state({{1, 0}, 1});
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(ghz.amplitudes[i] - flipped.amplitudes[i]) < 1e-15);
    }

    const auto bell = build_bell_pair();
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(bell.amplitudes[i] - ghz.amplitudes[i]) < 1e-15);
    }

    const auto dicke = build_dicke_state(4);
    REQUIRE(dicke.amplitudes.size() == 16);
    int support = 0;
    for (std::size_t idx = 0; idx < 16; ++idx) {
        if (__builtin_popcountll(idx) == 2) {
            ++support;
            CHECK(std::abs(dicke.amplitudes[idx] -
                           std::complex<double>(1.0 / std::sqrt(6.0))) < 1e-15);
        } else {
            CHECK(std::abs(dicke.amplitudes[idx]) == 0.0);
        }
    }
    CHECK(support == 6);
    CHECK(state_norm_sq(dicke) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("state construction rejects bad shapes") {
    CHECK_THROWS_AS(build_ghz_state({{0, 1, 0}, 0}), InvalidEnsembleError);
    CHECK_THROWS_AS(build_dicke_state(5), InvalidEnsembleError);
    CHECK_THROWS_AS(build_ghz_state({std::vector<std::uint8_t>(18, 0), 0}, 16),
                    CapacityError);
    CHECK_THROWS_AS(build_dicke_state(18, 16), CapacityError);

    PureState bad;
    bad.num_qubits = 2;
    bad.amplitudes = {1.0, 0.0, 0.0}; // wrong dimension
    CHECK_THROWS_AS(check_normalized(bad), DimensionError);
    bad.amplitudes = {0.5, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(check_normalized(bad), Error);
}

TEST_CASE("free evolution is a global phase on half-excited states") {
    const std::vector<double> angles{0.3, -0.8, 1.2, 0.5};
    const auto dicke = build_dicke_state(4);
    const auto before = outcome_distribution(dicke, {angles});
    const auto after = outcome_distribution(evolve_free(dicke, 0.77), {angles});
    for (std::size_t i = 0; i < before.size(); ++i) {
        CHECK(std::abs(before[i] - after[i]) < 1e-14);
    }

    // but a genuine relative phase on a non-eigenstate
    PureState plus;
    plus.num_qubits = 2;
    const double r = 1.0 / std::sqrt(2.0);
    plus.amplitudes = {r, r, 0.0, 0.0}; // (|00> + |01>)/sqrt(2), weights 0, 1
    const auto evolved = evolve_free(plus, 0.9);
    CHECK(std::abs(evolved.amplitudes[0] - std::complex<double>(r)) < 1e-15);
    CHECK(std::abs(evolved.amplitudes[1] - r * std::polar(1.0, -0.9)) < 1e-15);
}

TEST_CASE("outcome distribution equals the bra-ket oracle") {
    const std::vector<double> angles4{0.37, -1.21, 0.83, 2.45};

    for (const auto& state :
         {build_ghz_state({{0, 1, 1, 0}, 0}), build_dicke_state(4)}) {
        const auto fast = outcome_distribution(state, {angles4});
        const auto slow = qtest::oracle_distribution(state, angles4);
        double total = 0.0;
        for (std::size_t i = 0; i < fast.size(); ++i) {
            REQUIRE(fast[i] >= 0.0);
            CHECK(std::abs(fast[i] - slow[i]) < 1e-12);
            total += fast[i];
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }

    const auto scratch = scratch_state();
    const std::vector<double> angles3{1.9, -0.4, 0.6};
    const auto fast = outcome_distribution(scratch, {angles3});
    const auto slow = qtest::oracle_distribution(scratch, angles3);
    for (std::size_t i = 0; i < fast.size(); ++i) {
        CHECK(std::abs(fast[i] - slow[i]) < 1e-12);
    }

    CHECK_THROWS_AS(outcome_distribution(scratch, {angles4}), DimensionError);
}

TEST_CASE("joint sampler follows the exact distribution") {
    const auto state = build_ghz_state({{0, 0, 1, 1}, 0});
    const std::vector<double> angles{0.9, -0.3, 0.45, 1.3};
    const auto probs = outcome_distribution(state, {angles});
    const JointOutcomeSampler sampler(state, {angles});
    RandomSource rng(31337);
    std::vector<std::int64_t> counts(16, 0);
    const int draws = 60000;
    for (int i = 0; i < draws; ++i) {
        const auto out = sampler.draw(rng);
        REQUIRE(out.outcomes.size() == 4);
        for (auto x : out.outcomes) REQUIRE((x == 1 || x == -1));
        ++counts[qtest::outcome_index(out.outcomes)];
    }
    CHECK(qtest::chi_square_stat(counts, probs) <
          qtest::chi_square_critical(15));

    // one-shot sampler agrees with the cached one on a smaller case
    const auto bell = build_bell_pair();
    const std::vector<double> pair_angles{0.6, -0.9};
    const auto bell_probs = outcome_distribution(bell, {pair_angles});
    std::vector<std::int64_t> bell_counts(4, 0);
    for (int i = 0; i < 40000; ++i) {
        const auto out = sample_outcome(bell, {pair_angles}, rng);
        ++bell_counts[qtest::outcome_index(out.outcomes)];
    }
    CHECK(qtest::chi_square_stat(bell_counts, bell_probs) <
          qtest::chi_square_critical(3));
}

TEST_CASE("closed-form GHZ sampler matches the joint law string by string") {
    const DistributionSequence seq{{1, 0, 0, 1}, 0};
    const std::vector<double> angles{0.52, -0.17, 1.05, -0.74};
    double phi = 0.0;
    for (int i = 0; i < 4; ++i) phi += (seq.flags[i] ? -1.0 : 1.0) * angles[i];

    std::vector<double> law(16);
    for (std::size_t idx = 0; idx < 16; ++idx) {
        const int parity = __builtin_popcountll(idx) % 2 ? -1 : 1;
        law[idx] = (1.0 + parity * std::cos(phi)) / 16.0;
    }
    // law must agree with the statevector path before testing the sampler
    const auto sv = outcome_distribution(build_ghz_state(seq), {angles});
    for (std::size_t idx = 0; idx < 16; ++idx) {
        REQUIRE(std::abs(law[idx] - sv[idx]) < 1e-12);
    }

    RandomSource rng(777);
    std::vector<std::int64_t> counts(16, 0);
    double product_sum = 0.0;
    const int draws = 80000;
    for (int i = 0; i < draws; ++i) {
        const auto out = sample_ghz_closed_form(seq, {angles}, rng);
        ++counts[qtest::outcome_index(out.outcomes)];
        product_sum += out.product();
    }
    CHECK(qtest::chi_square_stat(counts, law) < qtest::chi_square_critical(15));
    const double sigma =
        std::sqrt((1.0 - std::cos(phi) * std::cos(phi)) / draws);
    CHECK(std::abs(product_sum / draws - std::cos(phi)) < 4.5 * sigma);
}

TEST_CASE("closed-form GHZ sampler scales past any statevector") {
    const int n = 40;
    std::vector<std::uint8_t> flags(n, 0);
    for (int i = n / 2; i < n; ++i) flags[i] = 1;
    std::vector<double> angles(n);
    for (int i = 0; i < n; ++i) angles[i] = 0.01 * i - 0.2;
    RandomSource rng(4);
    const auto out = sample_ghz_closed_form({flags, 0}, {angles}, rng);
    REQUIRE(out.outcomes.size() == 40);
    CHECK((out.product() == 1 || out.product() == -1));
}

TEST_CASE("bell pair sampler has uniform marginals and the cosine fringe") {
    const double tp = 0.71, tc = -0.32;
    RandomSource rng(99);
    std::vector<std::int64_t> counts(4, 0);
    const int draws = 60000;
    long marginal = 0;
    for (int i = 0; i < draws; ++i) {
        const auto [xp, xc] = sample_bell_pair_outcomes(tp, tc, rng);
        REQUIRE((xp == 1 || xp == -1));
        REQUIRE((xc == 1 || xc == -1));
        ++counts[(xp < 0 ? 2 : 0) + (xc < 0 ? 1 : 0)];
        marginal += xp;
    }
    std::vector<double> law(4);
    for (int i = 0; i < 4; ++i) {
        const int prod = ((i >> 1) ? -1 : 1) * ((i & 1) ? -1 : 1);
        law[i] = 0.25 * (1.0 + prod * std::cos(tp - tc));
    }
    CHECK(qtest::chi_square_stat(counts, law) < qtest::chi_square_critical(3));
    CHECK(std::abs(marginal / double(draws)) < 4.0 / std::sqrt(draws));
}

TEST_CASE("dicke pair visibility comes out of the statevector") {
    // closed form N/(2(N-1)) cos vs pair moments of the exact distribution
    for (int n : {2, 4, 6}) {
        std::vector<double> angles(n);
        for (int i = 0; i < n; ++i) angles[i] = 0.2 + 0.31 * i;
        const auto probs =
            outcome_distribution(build_dicke_state(n), {angles});
        for (int b = 1; b < n; ++b) {
            double e = 0.0;
            for (std::size_t idx = 0; idx < probs.size(); ++idx) {
                const int xa = ((idx >> (n - 1)) & 1) ? -1 : 1;
                const int xb = ((idx >> (n - 1 - b)) & 1) ? -1 : 1;
                e += probs[idx] * xa * xb;
            }
            CHECK(std::abs(e - dicke_pair_correlation(
                                   n, angles[b] - angles[0])) < 1e-12);
        }
    }
    CHECK(dicke_pair_correlation(2, 0.4) == doctest::Approx(std::cos(0.4)));
    CHECK(dicke_pair_correlation(8, 0.0) == doctest::Approx(8.0 / 14.0));
    CHECK_THROWS_AS(dicke_pair_correlation(3, 0.1), InvalidEnsembleError);
}

TEST_CASE("marginal dicke pair sampler follows its law") {
    const int n = 8;
    const double tp = 0.4, ti = -0.55;
    const double vcos = dicke_pair_correlation(n, tp - ti);
    RandomSource rng(12321);
    std::vector<std::int64_t> counts(4, 0);
    for (int i = 0; i < 60000; ++i) {
        const auto [xp, xi] = sample_dicke_pair(n, tp, ti, rng);
        ++counts[(xp < 0 ? 2 : 0) + (xi < 0 ? 1 : 0)];
    }
    std::vector<double> law(4);
    for (int i = 0; i < 4; ++i) {
        const int prod = ((i >> 1) ? -1 : 1) * ((i & 1) ? -1 : 1);
        law[i] = 0.25 * (1.0 + prod * vcos);
    }
    CHECK(qtest::chi_square_stat(counts, law) < qtest::chi_square_critical(3));
}

TEST_CASE("accumulator keeps exact per-cell per-quadrature tallies") {
    FringeAccumulator acc(3);
    acc.add(0, Quadrature::COSINE, 1);
    acc.add(0, Quadrature::COSINE, -1);
    acc.add(0, Quadrature::COSINE, -1);
    acc.add(0, Quadrature::SINE, 1);
    acc.add(2, Quadrature::SINE, -1);
    CHECK(acc.count(0, Quadrature::COSINE) == 3);
    CHECK(acc.sum(0, Quadrature::COSINE) == -1);
    CHECK(acc.count(0, Quadrature::SINE) == 1);
    CHECK(acc.sum(0, Quadrature::SINE) == 1);
    CHECK(acc.count(1, Quadrature::COSINE) == 0);
    CHECK(acc.count(2, Quadrature::SINE) == 1);
    CHECK(acc.total_count() == 5);

    CHECK_THROWS_AS(acc.add(3, Quadrature::COSINE, 1), DimensionError);
    CHECK_THROWS_AS(acc.add(0, Quadrature::COSINE, 2), DimensionError);
    CHECK_THROWS_AS(acc.add(0, Quadrature::COSINE, 0), DimensionError);
}

TEST_CASE("accumulator merge is exact and order-free") {
    FringeAccumulator a(2), b(2), ab(2);
    RandomSource rng(6);
    for (int i = 0; i < 500; ++i) {
        const auto cell = static_cast<std::size_t>(rng.next_below(2));
        const auto q = rng.next_bernoulli(0.5) ? Quadrature::SINE
                                               : Quadrature::COSINE;
        const int product = rng.next_bernoulli(0.5) ? 1 : -1;
        (i % 2 ? a : b).add(cell, q, product);
        ab.add(cell, q, product);
    }
    FringeAccumulator merged(2);
    merged.merge(b);
    merged.merge(a);
    CHECK(merged == ab);

    FringeAccumulator wrong(3);
    CHECK_THROWS_AS(wrong.merge(a), DimensionError);
}
