#include "ghzlab/counterfactual.hpp"

#include <algorithm>
#include <set>
#include <thread>

#include "ghzlab/error.hpp"
#include "ghzlab/state.hpp"

namespace ghzlab {

namespace {

Variable variable_for(int particle, PauliOp op) {
    switch (op) {
        case PauliOp::X: return {particle, Axis::X};
        case PauliOp::Y: return {particle, Axis::Y};
        default:
            throw Error(ErrorCode::InvalidArgument,
                        std::string("no counterfactual variable for operator ") + to_char(op));
    }
}

// Cancels adjacent equal factors (σ² = 1) without reordering anything.
std::vector<PauliOp> cancel_squares(const std::vector<PauliOp>& factors) {
    std::vector<PauliOp> out;
    for (PauliOp op : factors) {
        if (op == PauliOp::I) continue;
        if (!out.empty() && out.back() == op) {
            out.pop_back();
        } else {
            out.push_back(op);
        }
    }
    return out;
}

int product_with_mask(const std::vector<std::size_t>& indices, std::uint32_t mask) {
    int parity = 0;
    for (std::size_t i : indices) parity ^= static_cast<int>((mask >> i) & 1u);
    return parity ? -1 : 1;
}

}  // namespace

std::string Variable::name() const {
    return std::string("m_") + (axis == Axis::X ? "x" : "y") + "^" + std::to_string(particle);
}

void Assignment::set(Variable v, int value) {
    if (value != 1 && value != -1) throw Error(ErrorCode::InvalidArgument, "assigned values must be ±1");
    values_[v] = value;
}

int Assignment::value(Variable v) const {
    const auto it = values_.find(v);
    if (it == values_.end()) throw Error(ErrorCode::Unassigned, "variable " + v.name() + " is unassigned");
    return it->second;
}

int monomial_value(std::span<const Variable> monomial, const Assignment& a) {
    int product = 1;
    for (const Variable& v : monomial) product *= a.value(v);
    return product;
}

bool evaluate(const Constraint& c, const Assignment& a) {
    return monomial_value(c.monomial, a) == c.required_sign;
}

Assignment EnumerationReport::assignment(std::uint32_t mask) const {
    Assignment a;
    for (std::size_t i = 0; i < variables.size(); ++i) a.set(variables[i], ((mask >> i) & 1u) ? -1 : 1);
    return a;
}

EnumerationReport enumerate(std::span<const Constraint> constraints, std::span<const Variable> extra_variables,
                            unsigned threads) {
    std::set<Variable> vars(extra_variables.begin(), extra_variables.end());
    for (const Constraint& c : constraints) {
        if (c.required_sign != 1 && c.required_sign != -1) {
            throw Error(ErrorCode::InvalidArgument, "required sign must be ±1");
        }
        vars.insert(c.monomial.begin(), c.monomial.end());
    }
    if (vars.size() > kMaxEnumerationVariables) {
        throw Error(ErrorCode::LimitExceeded, std::to_string(vars.size()) + " variables exceed the bound of " +
                                                  std::to_string(kMaxEnumerationVariables));
    }

    EnumerationReport report;
    report.variables.assign(vars.begin(), vars.end());

    // Each constraint becomes a list of bit positions; each mask is a candidate.
    std::vector<std::vector<std::size_t>> bits;
    for (const Constraint& c : constraints) {
        std::vector<std::size_t> idx;
        for (const Variable& v : c.monomial) {
            const auto it = std::lower_bound(report.variables.begin(), report.variables.end(), v);
            idx.push_back(static_cast<std::size_t>(it - report.variables.begin()));
        }
        bits.push_back(std::move(idx));
    }

    const std::uint64_t total = std::uint64_t{1} << report.variables.size();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
    std::vector<std::vector<std::uint32_t>> partial(threads);
    const auto worker = [&](unsigned w) {
        const std::uint64_t begin = total * w / threads;
        const std::uint64_t end = total * (w + 1) / threads;
        for (std::uint64_t m = begin; m < end; ++m) {
            const auto mask = static_cast<std::uint32_t>(m);
            bool ok = true;
            for (std::size_t k = 0; k < bits.size() && ok; ++k) {
                ok = product_with_mask(bits[k], mask) == constraints[k].required_sign;
            }
            if (ok) partial[w].push_back(mask);
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    }
    for (auto& part : partial) report.satisfying.insert(report.satisfying.end(), part.begin(), part.end());
    report.n_assignments_checked = total;
    report.satisfiable = !report.satisfying.empty();
    return report;
}

std::optional<int> forced_value(const EnumerationReport& report, std::span<const Variable> monomial) {
    std::optional<int> value;
    for (std::uint32_t mask : report.satisfying) {
        const int v = monomial_value(monomial, report.assignment(mask));
        if (value && *value != v) return std::nullopt;
        value = v;
    }
    return value;
}

Constraint constraint_from_operator(const PauliString& p, int eigenvalue, std::string label) {
    if (!p.is_hermitian()) throw Error(ErrorCode::NonHermitian, "operator " + p.str() + " is not Hermitian");
    if (eigenvalue != 1 && eigenvalue != -1) throw Error(ErrorCode::InvalidArgument, "eigenvalue must be ±1");
    Constraint c;
    c.label = std::move(label);
    c.required_sign = eigenvalue * p.phase().sign();
    for (int q = 0; q < p.n_qubits(); ++q) {
        if (p.at(q) != PauliOp::I) c.monomial.push_back(variable_for(q + 1, p.at(q)));
    }
    return c;
}

bool parity_forbids(std::span<const Constraint> constraints) {
    std::map<Variable, int> occurrences;
    int sign = 1;
    for (const Constraint& c : constraints) {
        for (const Variable& v : c.monomial) ++occurrences[v];
        sign *= c.required_sign;
    }
    const bool all_even =
        std::all_of(occurrences.begin(), occurrences.end(), [](const auto& kv) { return kv.second % 2 == 0; });
    return all_even && sign == -1;
}

std::vector<Constraint> ghz_constraints() {
    const GhzOperators ops = ghz_operators();
    const StateVector psi = make_ghz_state();
    std::vector<Constraint> out;
    int i = 1;
    for (const PauliString* a : {&ops.a1, &ops.a2, &ops.a3}) {
        const EigenReport e = eigencheck(*a, psi);
        if (!e.is_eigenstate) throw Error(ErrorCode::InvalidArgument, "GHZ state is not an eigenstate of A" + std::to_string(i));
        out.push_back(constraint_from_operator(*a, e.eigenvalue, "A" + std::to_string(i)));
        ++i;
    }
    return out;
}

Constraint ghz_x_constraint() {
    const GhzOperators ops = ghz_operators();
    const EigenReport e = eigencheck(ops.a4, make_ghz_state());
    if (!e.is_eigenstate) throw Error(ErrorCode::InvalidArgument, "GHZ state is not an eigenstate of A4");
    return constraint_from_operator(ops.a4, e.eigenvalue, "A4");
}

KsIdentityReport ks_identity_check() {
    std::vector<Constraint> all = ghz_constraints();
    all.push_back(ghz_x_constraint());
    std::vector<Variable> joint;
    for (const Constraint& c : all) joint.insert(joint.end(), c.monomial.begin(), c.monomial.end());

    // Enumerate the bare variable set, then evaluate the joint monomial.
    const EnumerationReport every = enumerate({}, joint);
    KsIdentityReport r;
    r.assignments_checked = every.n_assignments_checked;
    for (std::uint32_t mask : every.satisfying) {
        if (monomial_value(joint, every.assignment(mask)) == 1) ++r.product_plus_one;
    }
    r.counterfactual_value = r.product_plus_one == r.assignments_checked ? 1 : 0;

    const GhzOperators ops = ghz_operators();
    r.operator_product = ops.a1 * ops.a2 * ops.a3 * ops.a4;
    r.operator_value = r.operator_product.is_identity_word() && r.operator_product.is_hermitian()
                           ? r.operator_product.phase().sign()
                           : 0;
    r.discrepancy = r.counterfactual_value != r.operator_value;
    return r;
}

ProductStateReport product_state_case() {
    const GhzOperators ops = ghz_operators();
    const StateVector psi2 = make_product_state();
    ProductStateReport r;

    // Per-particle factor sequences of A1 A2 A3, kept in order; only adjacent
    // repeats cancel.
    const std::array<const PauliString*, 3> seq = {&ops.a1, &ops.a2, &ops.a3};
    Constraint c;
    c.label = "grouped product";
    for (int k = 0; k < 3; ++k) {
        std::vector<PauliOp> factors;
        for (const PauliString* a : seq) factors.push_back(a->at(k));
        for (PauliOp op : cancel_squares(factors)) c.monomial.push_back(variable_for(k + 1, op));
    }
    const EigenReport grouped = eigencheck(ops.hat1 * ops.hat2 * ops.hat3, psi2);
    r.grouped_eigenvalue = grouped.eigenvalue;
    // The operator product as written has eigenvalue `grouped`; its
    // counterfactual reading substitutes a value for every factor.
    c.required_sign = grouped.is_eigenstate ? grouped.eigenvalue : 1;
    r.counterfactual_constraint = c;

    const std::vector<Variable> x_product = {{1, Axis::X}, {2, Axis::X}, {3, Axis::X}};
    const std::array<Constraint, 1> system = {c};
    const EnumerationReport en = enumerate(system, x_product);
    r.counterfactual_product = forced_value(en, x_product).value_or(0);

    const EigenReport q = eigencheck(ops.a4, psi2);
    r.quantum_product = q.eigenvalue;
    r.quantum_residual = q.residual;

    r.preexisting_product = 1;
    for (int k = 1; k <= 3; ++k) {
        const EigenReport e = eigencheck(PauliString::single(3, k, PauliOp::X), psi2);
        r.preexisting_x_values[static_cast<std::size_t>(k - 1)] = e.eigenvalue;
        r.preexisting_product *= e.eigenvalue;
    }
    r.contradiction = r.counterfactual_product != r.quantum_product;
    return r;
}

SingleParticleReport single_particle_case() {
    using enum PauliOp;
    const StateVector psi3 = make_single_state();
    const PauliString x({X});
    const PauliString y({Y});
    const PauliString sandwich = y * x * y;
    SingleParticleReport r;

    const EigenReport e = eigencheck(sandwich, psi3);
    r.sandwich_eigenvalue = e.eigenvalue;
    Constraint c;
    c.label = "sandwich";
    c.monomial = {{1, Axis::Y}, {1, Axis::X}, {1, Axis::Y}};
    c.required_sign = e.is_eigenstate ? e.eigenvalue : 1;
    r.counterfactual_constraint = c;

    const std::vector<Variable> mx = {{1, Axis::X}};
    const std::array<Constraint, 1> system = {c};
    r.counterfactual_mx = forced_value(enumerate(system), mx).value_or(0);

    const EigenReport q = eigencheck(x, psi3);
    r.quantum_mx = q.eigenvalue;
    r.quantum_residual = q.residual;

    r.symbolic_product = sandwich * x;
    r.identity_is_minus_one = r.symbolic_product.is_identity_word() && r.symbolic_product.phase() == Phase::minus_one();
    r.contradiction = r.counterfactual_mx != r.quantum_mx;
    return r;
}

}  // namespace ghzlab
