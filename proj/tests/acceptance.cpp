// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ghzlab/bell.hpp"
#include "ghzlab/counterfactual.hpp"
#include "ghzlab/measurement.hpp"
#include "ghzlab/pauli.hpp"
#include "ghzlab/report.hpp"
#include "ghzlab/state.hpp"
#include "matrix_oracle.hpp"

using namespace ghzlab;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

Outcome symbolic_algebra() {
    const auto start = Clock::now();
    const GhzOperators ops = ghz_operators();
    const std::array<const PauliString*, 4> as = {&ops.a1, &ops.a2, &ops.a3, &ops.a4};
    bool all_commute = true;
    for (const PauliString* p : as)
        for (const PauliString* q : as) all_commute = all_commute && commutes(*p, *q);
    const PauliString a123 = ops.a1 * ops.a2 * ops.a3;
    const bool minus_a4 = a123 == -ops.a4;
    const bool minus_identity = a123 * ops.a4 == -PauliString::identity(3);
    const bool grouping = a123 == ops.hat1 * ops.hat2 * ops.hat3;
    const double elapsed = seconds_since(start);
    return {all_commute && minus_a4 && minus_identity && grouping && elapsed < 1.0,
            "commute=" + std::to_string(all_commute) + " A1A2A3=-A4:" + std::to_string(minus_a4) +
                " A1A2A3A4=-I:" + std::to_string(minus_identity) + " grouping:" + std::to_string(grouping) +
                " time=" + fmt(elapsed) + "s"};
}

Outcome matrix_oracle_equivalence() {
    std::mt19937_64 rng(20241016);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const PauliString p = oracle::random_pauli(rng, 3);
        const PauliString q = oracle::random_pauli(rng, 3);
        const auto expected = oracle::matmul(oracle::to_matrix(p), oracle::to_matrix(q));
        worst = std::max(worst, oracle::max_abs_diff(oracle::to_matrix(p * q), expected));
    }
    return {worst <= 1e-12, "200 random 3-qubit pairs, max |diff| = " + fmt(worst)};
}

Outcome eigenvalue_suite() {
    const GhzOperators ops = ghz_operators();
    const StateVector psi = make_ghz_state();
    const StateVector psi2 = make_product_state();
    const StateVector psi3 = make_single_state();
    const PauliString sandwich = PauliString({PauliOp::Y}) * PauliString({PauliOp::X}) * PauliString({PauliOp::Y});
    struct Case {
        PauliString op;
        StateVector state;
        int expected;
    };
    const std::vector<Case> cases = {
        {ops.a1, psi, 1},
        {ops.a2, psi, 1},
        {ops.a3, psi, 1},
        {ops.a4, psi, -1},
        {ops.hat1 * ops.hat2 * ops.hat3, psi2, 1},
        {ops.a4, psi2, -1},
        {sandwich, psi3, 1},
        {PauliString({PauliOp::X}), psi3, -1},
    };
    bool ok = true;
    double worst = 0.0;
    for (const Case& c : cases) {
        const EigenReport r = eigencheck(c.op, c.state);
        ok = ok && r.is_eigenstate && r.eigenvalue == c.expected && r.residual <= 1e-12;
        worst = std::max(worst, r.residual);
    }
    const bool a1_not_eigen = !eigencheck(ops.a1, psi2).is_eigenstate;
    return {ok && a1_not_eigen, "8 eigen-equations, max residual = " + fmt(worst) +
                                    "; A1 on product state non-eigen: " + std::to_string(a1_not_eigen)};
}

Outcome counterfactual_contradiction() {
    const auto start = Clock::now();
    std::vector<Constraint> all = ghz_constraints();
    all.push_back(ghz_x_constraint());
    const EnumerationReport full = enumerate(all);
    const std::vector<Constraint> a_only = ghz_constraints();
    const EnumerationReport partial = enumerate(a_only);
    const std::vector<Variable> xs = {{1, Axis::X}, {2, Axis::X}, {3, Axis::X}};
    const std::optional<int> forced = forced_value(partial, xs);
    const KsIdentityReport ks = ks_identity_check();
    const double elapsed = seconds_since(start);
    const bool ok = full.n_assignments_checked == 64 && full.satisfying.empty() && partial.satisfiable &&
                    forced == 1 && ks.assignments_checked == 64 && ks.product_plus_one == 64 &&
                    ks.operator_value == -1 && elapsed < 1.0;
    return {ok, "checked=" + std::to_string(full.n_assignments_checked) +
                    " satisfying=" + std::to_string(full.satisfying.size()) +
                    " A-only solutions=" + std::to_string(partial.satisfying.size()) +
                    " forced x-product=" + (forced ? std::to_string(*forced) : std::string("none")) +
                    " ks +1 count=" + std::to_string(ks.product_plus_one) +
                    " operator=" + std::to_string(ks.operator_value) + " time=" + fmt(elapsed) + "s"};
}

Outcome measurement_repeatability() {
    const GhzOperators ops = ghz_operators();
    const StateVector psi = make_ghz_state();
    const std::vector<Observable> seq = {Observable(ops.a1), Observable(ops.a2), Observable(ops.a1)};
    const Counts counts = sample_sequences(psi, seq, 10000, 1);
    std::uint64_t agree = 0;
    std::uint64_t total = 0;
    for (const auto& [tuple, n] : counts) {
        total += n;
        if (tuple[0] == tuple[2]) agree += n;
    }
    bool deterministic = true;
    const std::array<std::pair<const PauliString*, int>, 4> products = {
        {{&ops.a1, 1}, {&ops.a2, 1}, {&ops.a3, 1}, {&ops.a4, -1}}};
    for (std::size_t k = 0; k < products.size(); ++k) {
        const std::vector<Observable> one = {Observable(*products[k].first)};
        const Counts c = sample_sequences(psi, one, 10000, derive_seed(2, k));
        deterministic = deterministic && c.size() == 1 && c.begin()->first == OutcomeTuple{products[k].second};
    }
    return {total == 10000 && agree == total && deterministic,
            "step0==step2 in " + std::to_string(agree) + "/" + std::to_string(total) +
                " trials; A1..A3=+1, A4=-1 deterministic: " + std::to_string(deterministic)};
}

Outcome order_dependence() {
    const Observable x(PauliString({PauliOp::X}));
    const Observable z(PauliString({PauliOp::Z}));
    const std::vector<Observable> xz = {x, z};
    const std::vector<Observable> zx = {z, x};
    const OrderComparison nc = order_statistics(StateVector::basis(1, 0), xz, zx, 100000, 3);
    const GhzOperators ops = ghz_operators();
    const std::vector<Observable> a12 = {Observable(ops.a1), Observable(ops.a2)};
    const std::vector<Observable> a21 = {Observable(ops.a2), Observable(ops.a1)};
    const OrderComparison c = order_statistics(make_product_state(), a12, a21, 100000, 4);
    const bool sampled = nc.check_a.within_bound && nc.check_b.within_bound && c.check_a.within_bound &&
                         c.check_b.within_bound;
    return {!nc.identical_exact && c.identical_exact && sampled,
            "non-commuting differ: " + std::to_string(!nc.identical_exact) +
                " (max diff " + fmt(nc.max_abs_difference) + "); commuting identical: " +
                std::to_string(c.identical_exact) + "; max z = " +
                fmt(std::max({nc.check_a.max_z, nc.check_b.max_z, c.check_a.max_z, c.check_b.max_z}))};
}

Outcome bell_identity_fuzz() {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> length(1, 10000);
    int violations = 0;
    std::int64_t min3 = INT64_MAX;
    std::int64_t min4 = INT64_MAX;
    for (int k = 0; k < 1000; ++k) {
        const std::size_t n = length(rng);
        std::array<Column, 4> cols;
        // Mix unbiased and strongly correlated columns.
        const double flip = (k % 3 == 0) ? 0.5 : 0.05 * (k % 7);
        for (Column& col : cols) col.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::int8_t base = (rng() & 1) ? 1 : -1;
            for (Column& col : cols) {
                const bool f = std::uniform_real_distribution<double>(0, 1)(rng) < flip;
                col[i] = f ? static_cast<std::int8_t>(-base) : base;
            }
        }
        const Bell3Report b3 = bell3_check(cols[0], cols[1], cols[2]);
        const Chsh4Report c4 = chsh4_check(cols[0], cols[1], cols[2], cols[3]);
        if (b3.margin_scaled < 0) ++violations;
        if (c4.margin_scaled < 0) ++violations;
        min3 = std::min(min3, b3.margin_scaled);
        min4 = std::min(min4, c4.margin_scaled);
    }
    return {violations == 0, "1000 data sets, violations = " + std::to_string(violations) +
                                 ", min bell3 margin*N = " + std::to_string(min3) +
                                 ", min chsh margin*N = " + std::to_string(min4)};
}

Outcome chsh_violation() {
    const auto start = Clock::now();
    const double pi = std::numbers::pi;
    const ChshRunReport r = chsh_independent_runs({0.0, pi / 2, pi / 4, 3 * pi / 4}, 100000, 1);
    const double elapsed = seconds_since(start);
    const double target = 2 * std::numbers::sqrt2;
    return {std::abs(std::abs(r.s) - target) <= 0.05 && elapsed < 10.0,
            "|S| = " + fmt(std::abs(r.s)) + " (sign form " + std::to_string(r.s_form) + ", canonical form " +
                fmt(r.s_canonical) + "), target " + fmt(target) + ", time=" + fmt(elapsed) + "s"};
}

std::string run_cli(const std::string& args, int& exit_code) {
    const std::string cmd = std::string(GHZ_LAB_EXE) + " " + args + " 2>/dev/null";
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        exit_code = -1;
        return out;
    }
    std::array<char, 4096> buf;
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

Outcome determinism() {
    int identical = 0;
    std::string mismatched;
    for (const std::string& sub : subcommands()) {
        int code_a = 0;
        int code_b = 0;
        const std::string args = sub + " --seed 12345 --deterministic";
        const std::string a = run_cli(args, code_a);
        const std::string b = run_cli(args, code_b);
        if (!a.empty() && a == b && code_a == code_b && code_a != 2) {
            ++identical;
        } else {
            mismatched += " " + sub;
        }
    }
    const int total = static_cast<int>(subcommands().size());
    return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                    " subcommands byte-identical" +
                                    (mismatched.empty() ? "" : "; differing:" + mismatched)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"symbolic algebra", symbolic_algebra},
        {"matrix-oracle equivalence", matrix_oracle_equivalence},
        {"eigenvalue suite", eigenvalue_suite},
        {"counterfactual contradiction", counterfactual_contradiction},
        {"measurement repeatability", measurement_repeatability},
        {"order dependence", order_dependence},
        {"bell identity fuzz", bell_identity_fuzz},
        {"chsh violation from independent runs", chsh_violation},
        {"cli determinism", determinism},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.passed) ++failed;
        std::cout << "criterion " << k + 1 << " [" << (o.passed ? "PASS" : "FAIL") << "] " << criteria[k].first
                  << ": " << o.detail << '\n';
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 1;
}
