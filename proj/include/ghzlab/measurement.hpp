#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ghzlab/pauli.hpp"
#include "ghzlab/rng.hpp"
#include "ghzlab/state.hpp"

namespace ghzlab {

struct MeasurementRecord {
    Observable observable;
    int outcome;         // +1 or -1
    double probability;  // Born probability of the realized outcome
    std::size_t step;
};

/// One eigenspace of an observable: the projector (I ± A)/2 applied to a state.
struct Branch {
    int outcome;
    double probability;
    std::optional<StateVector> post_state;  // empty when probability is zero
};

/// Both projections of `s` onto the ±1 eigenspaces of `a`. Probabilities sum
/// to 1; post-states are renormalized with the global phase fixed.
std::array<Branch, 2> project(const StateVector& s, const Observable& a);

struct MeasureResult {
    MeasurementRecord record;
    StateVector post_state;
};

/// Projective measurement of the product observable `a`. Only the joint ±1
/// value is determined; individual factors are never measured.
MeasureResult measure(const StateVector& s, const Observable& a, SplitMix64& rng, std::size_t step = 0);

struct SequenceResult {
    std::vector<MeasurementRecord> records;
    StateVector final_state;
};

SequenceResult run_sequence(const StateVector& s, std::span<const Observable> observables, std::uint64_t seed);

using OutcomeTuple = std::vector<int>;
using Distribution = std::map<OutcomeTuple, double>;
using Counts = std::map<OutcomeTuple, std::uint64_t>;

/// Exact joint outcome distribution by enumerating every projector chain.
/// Zero-probability branches are omitted.
Distribution exact_distribution(const StateVector& s, std::span<const Observable> observables);

/// Runs `trials` independent sequences; trial t uses derive_seed(seed, t), so
/// the counts do not depend on `threads`.
Counts sample_sequences(const StateVector& s, std::span<const Observable> observables, std::uint64_t trials,
                        std::uint64_t seed, unsigned threads = 1);

struct FrequencyCheck {
    double max_z = 0.0;  // largest |freq - p| / sqrt(p(1-p)/T)
    bool within_bound = true;
    bool outside_support = false;  // a zero-probability outcome was observed
};

/// Compares empirical counts to exact probabilities with a `sigmas`-σ
/// binomial bound per outcome.
FrequencyCheck check_frequencies(const Distribution& exact, const Counts& counts, std::uint64_t trials,
                                 double sigmas = 5.0);

struct OrderComparison {
    bool aligned = false;  // seq_b is a permutation of seq_a and tuples were reordered
    Distribution exact_a;
    Distribution exact_b;  // in seq_a's observable order when aligned
    Counts counts_a;
    Counts counts_b;       // in seq_a's observable order when aligned
    std::uint64_t trials = 0;
    bool identical_exact = false;
    double max_abs_difference = 0.0;
    FrequencyCheck check_a;
    FrequencyCheck check_b;
};

/// Measures the two orderings on independent trials and compares their joint
/// distributions. When seq_b reorders seq_a, outcomes are keyed by observable
/// so that "same distribution" means order does not matter.
OrderComparison order_statistics(const StateVector& s, std::span<const Observable> seq_a,
                                 std::span<const Observable> seq_b, std::uint64_t trials, std::uint64_t seed);

}  // namespace ghzlab
