#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include <json.hpp>

#include "ghzlab/pauli.hpp"

namespace ghzlab {

using Amplitude = std::complex<double>;

/// Residual and normalization tolerance shared by every numeric check.
inline constexpr double kTolerance = 1e-12;
inline constexpr int kMaxStateQubits = 3;

/// Dense state of 1..3 qubits. Basis index b encodes qubit 1 as its most
/// significant bit; bit 0 is |α⟩ (σ_z = +1) and bit 1 is |β⟩ (σ_z = -1).
/// Instances are immutable and always normalized.
class StateVector {
public:
    /// Throws unless the length is 2^n with 1 <= n <= 3 and the norm is 1.
    static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);
    /// Normalizes first; throws on a zero vector.
    static StateVector normalized(std::vector<Amplitude> amplitudes);
    static StateVector basis(int n_qubits, std::size_t index);

    int n_qubits() const { return n_qubits_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    Amplitude amplitude(std::size_t index) const { return amplitudes_.at(index); }
    double norm() const;

private:
    StateVector(int n_qubits, std::vector<Amplitude> amplitudes)
        : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}

    int n_qubits_;
    std::vector<Amplitude> amplitudes_;
};

/// (|ααα⟩ - |βββ⟩)/√2
StateVector make_ghz_state();
/// 2^(-3/2) (|α⟩-|β⟩)⊗(|α⟩-|β⟩)⊗(|α⟩-|β⟩)
StateVector make_product_state();
/// (|α⟩ - |β⟩)/√2
StateVector make_single_state();
/// (|αβ⟩ - |βα⟩)/√2, the two-particle spin singlet.
StateVector make_singlet_state();

/// Matrix action of `p` on raw amplitudes, computed site by site from the
/// action of X, Y and Z on basis kets. No normalization is applied.
std::vector<Amplitude> apply_raw(const PauliString& p, std::span<const Amplitude> amplitudes);

StateVector apply(const PauliString& p, const StateVector& s);

struct EigenReport {
    bool is_eigenstate = false;
    int eigenvalue = 0;  // ±1 when is_eigenstate, 0 otherwise
    double residual = 0.0;
};

/// residual = min over λ ∈ {+1, -1} of ‖p s − λ s‖.
EigenReport eigencheck(const PauliString& p, const StateVector& s, double tol = kTolerance);

double expectation(const Observable& a, const StateVector& s);
/// Throws ErrorCode::NonHermitian for a ±i phase.
double expectation(const PauliString& p, const StateVector& s);

std::complex<double> inner_product(std::span<const Amplitude> bra, std::span<const Amplitude> ket);
double distance(const StateVector& a, const StateVector& b);

/// Rotates the global phase so the largest-magnitude amplitude (lowest index
/// among ties) is real and positive.
StateVector normalize_global_phase(const StateVector& s);
bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol = kTolerance);

using DensityMatrix2 = std::array<std::array<Amplitude, 2>, 2>;

/// Reduced density matrix of one qubit (1-based).
DensityMatrix2 single_qubit_marginal(const StateVector& s, int qubit);

nlohmann::json to_json(const StateVector& s);
StateVector state_from_json(const nlohmann::json& j);

}  // namespace ghzlab
