#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghzlab/pauli.hpp"

namespace ghzlab {

enum class Axis : std::uint8_t { X, Y };

/// The counterfactual value m_axis^particle of one spin component.
struct Variable {
    int particle;
    Axis axis;

    std::string name() const;  // "m_x^1"
    friend auto operator<=>(const Variable&, const Variable&) = default;
};

/// Total map from variables to ±1.
class Assignment {
public:
    Assignment() = default;
    void set(Variable v, int value);
    /// Throws ErrorCode::Unassigned for an unknown variable.
    int value(Variable v) const;
    bool contains(Variable v) const { return values_.contains(v); }
    const std::map<Variable, int>& values() const { return values_; }

private:
    std::map<Variable, int> values_;
};

/// product(monomial) == required_sign. A variable listed twice contributes
/// its square, i.e. +1.
struct Constraint {
    std::vector<Variable> monomial;
    int required_sign = 1;
    std::string label;
};

int monomial_value(std::span<const Variable> monomial, const Assignment& a);
bool evaluate(const Constraint& c, const Assignment& a);

inline constexpr std::size_t kMaxEnumerationVariables = 24;

struct EnumerationReport {
    std::vector<Variable> variables;  // sorted; bit i of a mask is variables[i]
    std::uint64_t n_assignments_checked = 0;
    std::vector<std::uint32_t> satisfying;  // bit set means value -1
    bool satisfiable = false;

    std::size_t n_variables() const { return variables.size(); }
    Assignment assignment(std::uint32_t mask) const;
};

/// Checks every ±1 assignment of the variables in `constraints` plus
/// `extra_variables`. The assignment range may be split across `threads`
/// without changing the result.
EnumerationReport enumerate(std::span<const Constraint> constraints,
                            std::span<const Variable> extra_variables = {}, unsigned threads = 1);

/// The value `monomial` takes on every satisfying assignment, or nullopt if
/// it varies or nothing is satisfiable.
std::optional<int> forced_value(const EnumerationReport& report, std::span<const Variable> monomial);

/// Counterfactual reading of an x/y Pauli string: σ_x on particle k becomes
/// m_x^k. `required_sign` is the operator's eigenvalue divided by its phase.
Constraint constraint_from_operator(const PauliString& p, int eigenvalue, std::string label = {});

/// True when every variable occurs an even number of times across all
/// monomials while the required signs multiply to -1, which rules out any
/// satisfying assignment.
bool parity_forbids(std::span<const Constraint> constraints);

/// The three constraints m_x¹m_y²m_y³ = m_y¹m_x²m_y³ = m_y¹m_y²m_x³ = +1,
/// derived from the eigenvalues of A1..A3 on the GHZ state.
std::vector<Constraint> ghz_constraints();
/// m_x¹m_x²m_x³ = -1, derived from the eigenvalue of A4 on the GHZ state.
Constraint ghz_x_constraint();

struct KsIdentityReport {
    std::uint64_t assignments_checked = 0;
    std::uint64_t product_plus_one = 0;  // assignments whose four-monomial product is +1
    int counterfactual_value = 0;
    PauliString operator_product = PauliString::identity(3);
    int operator_value = 0;
    bool discrepancy = false;
};

KsIdentityReport ks_identity_check();

struct ProductStateReport {
    Constraint counterfactual_constraint;  // m_x¹ (m_y² m_x² m_y²) m_x³ = eigenvalue of the grouped product
    int grouped_eigenvalue = 0;            // from the state
    int counterfactual_product = 0;        // forced value of m_x¹m_x²m_x³
    int quantum_product = 0;               // eigenvalue of A4 on the product state
    double quantum_residual = 0.0;
    std::array<int, 3> preexisting_x_values{};
    int preexisting_product = 0;
    bool contradiction = false;
};

ProductStateReport product_state_case();

struct SingleParticleReport {
    Constraint counterfactual_constraint;  // m_y m_x m_y = eigenvalue of σ_yσ_xσ_y
    int sandwich_eigenvalue = 0;
    int counterfactual_mx = 0;
    int quantum_mx = 0;
    double quantum_residual = 0.0;
    PauliString symbolic_product = PauliString::identity(1);  // (σ_yσ_xσ_y)σ_x
    bool identity_is_minus_one = false;
    bool contradiction = false;
};

SingleParticleReport single_particle_case();

}  // namespace ghzlab
