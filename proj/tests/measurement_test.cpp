#include "ghzlab/measurement.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"

#include "ghzlab/error.hpp"
#include "matrix_oracle.hpp"

using namespace ghzlab;
using enum PauliOp;

namespace {

// Dense-projector oracle: walks every outcome tuple with (I ± M)/2 matrices.
void oracle_walk(const std::vector<oracle::cd>& v, const std::vector<Observable>& obs, std::size_t step,
                 OutcomeTuple& prefix, Distribution& out) {
    if (step == obs.size()) {
        double p = 0.0;
        for (const auto& a : v) p += std::norm(a);
        if (p > 1e-15) out[prefix] += p;
        return;
    }
    const oracle::Matrix m = oracle::to_matrix(obs[step].op());
    for (int outcome : {1, -1}) {
        oracle::Matrix proj(m.dim);
        for (std::size_t r = 0; r < m.dim; ++r)
            for (std::size_t c = 0; c < m.dim; ++c) proj(r, c) = (r == c ? 0.5 : 0.0) + 0.5 * outcome * m(r, c);
        prefix.push_back(outcome);
        oracle_walk(oracle::matvec(proj, v), obs, step + 1, prefix, out);
        prefix.pop_back();
    }
}

Distribution oracle_distribution(const StateVector& s, const std::vector<Observable>& obs) {
    Distribution out;
    OutcomeTuple prefix;
    oracle_walk({s.amplitudes().begin(), s.amplitudes().end()}, obs, 0, prefix, out);
    return out;
}

Observable obs(std::vector<PauliOp> word) { return Observable(PauliString(std::move(word))); }

}  // namespace

TEST(measurement, project_examples) {
    const auto branches = project(StateVector::basis(1, 0), obs({X}));
    EXPECT_NEAR(branches[0].probability, 0.5, 1e-15);
    EXPECT_NEAR(branches[1].probability, 0.5, 1e-15);
    ASSERT_TRUE(branches[0].post_state.has_value());
    EXPECT_GT(branches[0].post_state->amplitude(0).real(), 0.0);
    EXPECT_NEAR(branches[0].post_state->amplitude(1).real(), branches[0].post_state->amplitude(0).real(), 1e-15);

    const GhzOperators ops = ghz_operators();
    const auto ghz = project(make_ghz_state(), Observable(ops.a1));
    EXPECT_EQ(ghz[0].outcome, 1);
    EXPECT_NEAR(ghz[0].probability, 1.0, 1e-15);
    EXPECT_EQ(ghz[1].probability, 0.0);
    EXPECT_FALSE(ghz[1].post_state.has_value());
}

TEST(measurement, measure_records) {
    SplitMix64 rng(3);
    const GhzOperators ops = ghz_operators();
    const MeasureResult r = measure(make_ghz_state(), Observable(ops.a4), rng, 4);
    EXPECT_EQ(r.record.outcome, -1);
    EXPECT_NEAR(r.record.probability, 1.0, 1e-15);
    EXPECT_EQ(r.record.step, 4u);
    EXPECT_TRUE(equal_up_to_global_phase(r.post_state, make_ghz_state()));
    EXPECT_THROW(measure(make_ghz_state(), obs({X}), rng), Error);
}

TEST(measurement, repeated_measurement_agrees) {
    const GhzOperators ops = ghz_operators();
    const std::vector<Observable> seq = {Observable(ops.a1), Observable(ops.a2), Observable(ops.a1)};
    const Counts counts = sample_sequences(make_ghz_state(), seq, 10000, 11);
    std::uint64_t total = 0;
    for (const auto& [tuple, n] : counts) {
        EXPECT_EQ(tuple[0], tuple[2]);
        total += n;
    }
    EXPECT_EQ(total, 10000u);

    // Also true for a state where the first outcome is random.
    const std::vector<Observable> zxz_commuting = {obs({Z, I}), obs({I, X}), obs({Z, I})};
    for (const auto& [tuple, n] : sample_sequences(make_singlet_state(), zxz_commuting, 5000, 2)) {
        EXPECT_EQ(tuple[0], tuple[2]);
    }
}

TEST(measurement, ghz_products_deterministic) {
    const GhzOperators ops = ghz_operators();
    const std::array<std::pair<const PauliString*, int>, 4> cases = {
        {{&ops.a1, 1}, {&ops.a2, 1}, {&ops.a3, 1}, {&ops.a4, -1}}};
    for (const auto& [a, expected] : cases) {
        const std::vector<Observable> seq = {Observable(*a)};
        const Counts counts = sample_sequences(make_ghz_state(), seq, 2000, 9);
        ASSERT_EQ(counts.size(), 1u);
        EXPECT_EQ(counts.begin()->first, OutcomeTuple{expected});
    }
}

TEST(measurement, exact_distribution_matches_oracle) {
    const GhzOperators ops = ghz_operators();
    const std::vector<std::pair<StateVector, std::vector<Observable>>> cases = {
        {StateVector::basis(1, 0), {obs({X}), obs({Z})}},
        {StateVector::basis(1, 0), {obs({Z}), obs({X})}},
        {make_single_state(), {obs({Y}), obs({X}), obs({Y})}},
        {make_ghz_state(), {Observable(ops.a1), Observable(ops.hat1), Observable(ops.a4)}},
        {make_product_state(), {Observable(ops.a1), Observable(ops.a2), Observable(ops.a3)}},
        {make_singlet_state(), {obs({Z, I}), obs({I, X}), obs({X, I}), obs({I, Z})}},
    };
    for (const auto& [state, seq] : cases) {
        const Distribution got = exact_distribution(state, seq);
        const Distribution want = oracle_distribution(state, seq);
        ASSERT_EQ(got.size(), want.size());
        double total = 0.0;
        for (const auto& [tuple, p] : want) {
            ASSERT_TRUE(got.contains(tuple));
            EXPECT_NEAR(got.at(tuple), p, 1e-12);
            total += got.at(tuple);
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(measurement, random_sequences_match_oracle) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + trial % 3;
        std::vector<Observable> seq;
        for (int k = 0; k < 3; ++k) {
            PauliString p = oracle::random_pauli(rng, n);
            seq.emplace_back(p.with_phase(p.phase().is_real() ? p.phase() : Phase::plus_one()));
        }
        const StateVector s = StateVector::basis(n, rng() % (std::size_t{1} << n));
        const Distribution got = exact_distribution(s, seq);
        const Distribution want = oracle_distribution(s, seq);
        ASSERT_EQ(got.size(), want.size());
        for (const auto& [tuple, p] : want) EXPECT_NEAR(got.at(tuple), p, 1e-12);
    }
}

TEST(measurement, order_matters_for_non_commuting) {
    const std::vector<Observable> xz = {obs({X}), obs({Z})};
    const std::vector<Observable> zx = {obs({Z}), obs({X})};
    const OrderComparison r = order_statistics(StateVector::basis(1, 0), xz, zx, 100000, 42);
    EXPECT_TRUE(r.aligned);
    EXPECT_FALSE(r.identical_exact);
    EXPECT_EQ(r.exact_a.size(), 4u);
    for (const auto& [tuple, p] : r.exact_a) EXPECT_NEAR(p, 0.25, 1e-12);
    // Aligned to (x, z) order: z is always +1 when measured first.
    EXPECT_EQ(r.exact_b.size(), 2u);
    for (const auto& [tuple, p] : r.exact_b) {
        EXPECT_EQ(tuple[1], 1);
        EXPECT_NEAR(p, 0.5, 1e-12);
    }
    EXPECT_NEAR(r.max_abs_difference, 0.25, 1e-12);
    EXPECT_TRUE(r.check_a.within_bound);
    EXPECT_TRUE(r.check_b.within_bound);
    EXPECT_FALSE(r.check_b.outside_support);
}

TEST(measurement, order_irrelevant_for_commuting) {
    const GhzOperators ops = ghz_operators();
    const std::vector<Observable> a = {Observable(ops.a1), Observable(ops.a2)};
    const std::vector<Observable> b = {Observable(ops.a2), Observable(ops.a1)};
    for (const StateVector& s : {make_ghz_state(), make_product_state()}) {
        const OrderComparison r = order_statistics(s, a, b, 100000, 8);
        EXPECT_TRUE(r.identical_exact);
        EXPECT_LE(r.max_abs_difference, 1e-12);
        EXPECT_TRUE(r.check_a.within_bound);
        EXPECT_TRUE(r.check_b.within_bound);
    }
}

TEST(measurement, sampling_is_seeded_and_thread_invariant) {
    const std::vector<Observable> seq = {obs({X, I}), obs({Z, Z}), obs({I, Y})};
    const StateVector s = make_singlet_state();
    const Counts one = sample_sequences(s, seq, 20000, 123, 1);
    EXPECT_EQ(one, sample_sequences(s, seq, 20000, 123, 1));
    EXPECT_EQ(one, sample_sequences(s, seq, 20000, 123, 4));
    EXPECT_EQ(one, sample_sequences(s, seq, 20000, 123, 7));
    EXPECT_NE(one, sample_sequences(s, seq, 20000, 124, 1));
}

TEST(measurement, run_sequence_matches_sampling) {
    const std::vector<Observable> seq = {obs({X}), obs({Z})};
    const SequenceResult a = run_sequence(StateVector::basis(1, 0), seq, 77);
    const SequenceResult b = run_sequence(StateVector::basis(1, 0), seq, 77);
    ASSERT_EQ(a.records.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(a.records[i].outcome, b.records[i].outcome);
        EXPECT_EQ(a.records[i].step, i);
        EXPECT_NEAR(a.records[i].probability, 0.5, 1e-12);
    }
    EXPECT_EQ(distance(a.final_state, b.final_state), 0.0);
}

TEST(measurement, frequency_check_flags_outliers) {
    const Distribution exact = {{{1}, 0.5}, {{-1}, 0.5}};
    EXPECT_TRUE(check_frequencies(exact, {{{1}, 5010}, {{-1}, 4990}}, 10000).within_bound);
    EXPECT_FALSE(check_frequencies(exact, {{{1}, 6000}, {{-1}, 4000}}, 10000).within_bound);
    const FrequencyCheck off = check_frequencies({{{1}, 1.0}}, {{{1}, 9999}, {{-1}, 1}}, 10000);
    EXPECT_TRUE(off.outside_support);
    EXPECT_FALSE(off.within_bound);
}

TEST(measurement, dimension_errors) {
    const std::vector<Observable> seq = {obs({X, X})};
    EXPECT_THROW(exact_distribution(StateVector::basis(1, 0), seq), Error);
    EXPECT_THROW(sample_sequences(StateVector::basis(1, 0), seq, 10, 1), Error);
}
