#include "ghzlab/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ghzlab/error.hpp"

namespace ghzlab {

namespace {

// Branches below this weight are treated as impossible.
constexpr double kZeroProbability = 1e-15;

void check_observables(const StateVector& s, std::span<const Observable> observables) {
    for (const Observable& a : observables) {
        if (a.n_qubits() != s.n_qubits()) {
            throw Error(ErrorCode::DimensionMismatch,
                        "observable " + a.str() + " does not match a " + std::to_string(s.n_qubits()) +
                            "-qubit state");
        }
    }
}

void enumerate_chain(const StateVector& s, std::span<const Observable> observables, double weight,
                     OutcomeTuple& prefix, Distribution& out) {
    if (observables.empty()) {
        out[prefix] += weight;
        return;
    }
    for (const Branch& branch : project(s, observables.front())) {
        if (!branch.post_state) continue;
        prefix.push_back(branch.outcome);
        enumerate_chain(*branch.post_state, observables.subspan(1), weight * branch.probability, prefix, out);
        prefix.pop_back();
    }
}

OutcomeTuple sample_once(const StateVector& s, std::span<const Observable> observables, std::uint64_t seed) {
    SplitMix64 rng(seed);
    OutcomeTuple outcomes;
    outcomes.reserve(observables.size());
    StateVector current = s;
    for (std::size_t i = 0; i < observables.size(); ++i) {
        MeasureResult r = measure(current, observables[i], rng, i);
        outcomes.push_back(r.record.outcome);
        current = std::move(r.post_state);
    }
    return outcomes;
}

// perm[j] is the position in `a` matched to b[j], or empty if b is not a
// permutation of a.
std::optional<std::vector<std::size_t>> match_permutation(std::span<const Observable> a,
                                                          std::span<const Observable> b) {
    if (a.size() != b.size()) return std::nullopt;
    std::vector<bool> used(a.size(), false);
    std::vector<std::size_t> perm(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
        bool found = false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!used[i] && a[i] == b[j]) {
                used[i] = true;
                perm[j] = i;
                found = true;
                break;
            }
        }
        if (!found) return std::nullopt;
    }
    return perm;
}

OutcomeTuple reorder(const OutcomeTuple& t, const std::vector<std::size_t>& perm) {
    OutcomeTuple out(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) out[perm[j]] = t[j];
    return out;
}

}  // namespace

std::array<Branch, 2> project(const StateVector& s, const Observable& a) {
    if (a.n_qubits() != s.n_qubits()) {
        throw Error(ErrorCode::DimensionMismatch, "observable and state dimensions differ");
    }
    const std::vector<Amplitude> image = apply_raw(a.op(), s.amplitudes());
    std::array<Branch, 2> branches{Branch{+1, 0.0, std::nullopt}, Branch{-1, 0.0, std::nullopt}};
    std::array<std::vector<Amplitude>, 2> projected;
    for (int k = 0; k < 2; ++k) {
        const double sign = k == 0 ? 1.0 : -1.0;
        projected[k].resize(image.size());
        double weight = 0.0;
        for (std::size_t b = 0; b < image.size(); ++b) {
            projected[k][b] = 0.5 * (s.amplitudes()[b] + sign * image[b]);
            weight += std::norm(projected[k][b]);
        }
        branches[k].probability = weight;
    }
    for (int k = 0; k < 2; ++k) {
        if (branches[k].probability < kZeroProbability) {
            branches[k].probability = 0.0;
            branches[1 - k].probability = 1.0;
        }
    }
    for (int k = 0; k < 2; ++k) {
        if (branches[k].probability > 0.0) {
            branches[k].post_state = normalize_global_phase(StateVector::normalized(std::move(projected[k])));
        }
    }
    return branches;
}

MeasureResult measure(const StateVector& s, const Observable& a, SplitMix64& rng, std::size_t step) {
    auto branches = project(s, a);
    const double u = rng.uniform();
    Branch& chosen = u < branches[0].probability ? branches[0] : branches[1];
    if (!chosen.post_state) {
        throw Error(ErrorCode::ZeroProbabilityBranch, "sampled a zero-probability outcome of " + a.str());
    }
    return MeasureResult{MeasurementRecord{a, chosen.outcome, chosen.probability, step},
                         std::move(*chosen.post_state)};
}

SequenceResult run_sequence(const StateVector& s, std::span<const Observable> observables, std::uint64_t seed) {
    check_observables(s, observables);
    SplitMix64 rng(seed);
    SequenceResult result{{}, s};
    result.records.reserve(observables.size());
    for (std::size_t i = 0; i < observables.size(); ++i) {
        MeasureResult r = measure(result.final_state, observables[i], rng, i);
        result.records.push_back(std::move(r.record));
        result.final_state = std::move(r.post_state);
    }
    return result;
}

Distribution exact_distribution(const StateVector& s, std::span<const Observable> observables) {
    check_observables(s, observables);
    Distribution out;
    OutcomeTuple prefix;
    enumerate_chain(s, observables, 1.0, prefix, out);
    return out;
}

Counts sample_sequences(const StateVector& s, std::span<const Observable> observables, std::uint64_t trials,
                        std::uint64_t seed, unsigned threads) {
    check_observables(s, observables);
    threads = std::max(1u, threads);
    std::vector<Counts> partial(threads);
    const auto worker = [&](unsigned w) {
        const std::uint64_t begin = trials * w / threads;
        const std::uint64_t end = trials * (w + 1) / threads;
        for (std::uint64_t t = begin; t < end; ++t) ++partial[w][sample_once(s, observables, derive_seed(seed, t))];
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    }
    Counts merged;
    for (const Counts& c : partial) {
        for (const auto& [tuple, n] : c) merged[tuple] += n;
    }
    return merged;
}

FrequencyCheck check_frequencies(const Distribution& exact, const Counts& counts, std::uint64_t trials,
                                 double sigmas) {
    FrequencyCheck check;
    if (trials == 0) return check;
    const double t = static_cast<double>(trials);
    for (const auto& [tuple, n] : counts) {
        if (!exact.contains(tuple)) {
            check.outside_support = true;
            check.within_bound = false;
        }
    }
    for (const auto& [tuple, p] : exact) {
        const auto it = counts.find(tuple);
        const double freq = it == counts.end() ? 0.0 : static_cast<double>(it->second) / t;
        const double sd = std::sqrt(p * (1.0 - p) / t);
        const double dev = std::abs(freq - p);
        if (sd > 0.0) {
            check.max_z = std::max(check.max_z, dev / sd);
            if (dev > sigmas * sd) check.within_bound = false;
        } else if (dev > kTolerance) {
            check.within_bound = false;
        }
    }
    return check;
}

OrderComparison order_statistics(const StateVector& s, std::span<const Observable> seq_a,
                                 std::span<const Observable> seq_b, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw Error(ErrorCode::InvalidArgument, "order_statistics needs at least one trial");
    OrderComparison cmp;
    cmp.trials = trials;
    cmp.exact_a = exact_distribution(s, seq_a);
    cmp.counts_a = sample_sequences(s, seq_a, trials, derive_seed(seed, 0));
    const Distribution exact_b = exact_distribution(s, seq_b);
    const Counts counts_b = sample_sequences(s, seq_b, trials, derive_seed(seed, 1));
    cmp.check_a = check_frequencies(cmp.exact_a, cmp.counts_a, trials);
    cmp.check_b = check_frequencies(exact_b, counts_b, trials);

    if (const auto perm = match_permutation(seq_a, seq_b)) {
        cmp.aligned = true;
        for (const auto& [tuple, p] : exact_b) cmp.exact_b[reorder(tuple, *perm)] += p;
        for (const auto& [tuple, n] : counts_b) cmp.counts_b[reorder(tuple, *perm)] += n;
    } else {
        cmp.exact_b = exact_b;
        cmp.counts_b = counts_b;
    }

    Distribution keys = cmp.exact_a;
    for (const auto& [tuple, p] : cmp.exact_b) keys.emplace(tuple, 0.0);
    for (const auto& [tuple, unused] : keys) {
        const auto ia = cmp.exact_a.find(tuple);
        const auto ib = cmp.exact_b.find(tuple);
        const double pa = ia == cmp.exact_a.end() ? 0.0 : ia->second;
        const double pb = ib == cmp.exact_b.end() ? 0.0 : ib->second;
        cmp.max_abs_difference = std::max(cmp.max_abs_difference, std::abs(pa - pb));
    }
    cmp.identical_exact = cmp.max_abs_difference <= kTolerance;
    return cmp;
}

}  // namespace ghzlab
