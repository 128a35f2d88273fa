#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ghzlab {

enum class PauliOp : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(PauliOp op) noexcept;

/// A fourth root of unity, stored as the exponent k of i^k. All phase
/// bookkeeping is exact integer arithmetic mod 4.
class Phase {
public:
    constexpr Phase() = default;
    static constexpr Phase from_exponent(int k) { return Phase(static_cast<std::uint8_t>(((k % 4) + 4) % 4)); }
    static constexpr Phase plus_one() { return Phase(0); }
    static constexpr Phase plus_i() { return Phase(1); }
    static constexpr Phase minus_one() { return Phase(2); }
    static constexpr Phase minus_i() { return Phase(3); }

    constexpr int exponent() const { return k_; }
    constexpr bool is_real() const { return (k_ & 1) == 0; }
    /// +1 or -1; only meaningful when is_real().
    constexpr int sign() const { return k_ == 0 ? 1 : -1; }
    constexpr Phase inverse() const { return Phase(static_cast<std::uint8_t>((4 - k_) % 4)); }
    std::complex<double> value() const;
    std::string str() const;

    friend constexpr Phase operator*(Phase a, Phase b) {
        return Phase(static_cast<std::uint8_t>((a.k_ + b.k_) % 4));
    }
    friend constexpr bool operator==(Phase, Phase) = default;

private:
    constexpr explicit Phase(std::uint8_t k) : k_(k) {}
    std::uint8_t k_ = 0;
};

struct SingleProduct {
    Phase phase;
    PauliOp op;
    friend constexpr bool operator==(const SingleProduct&, const SingleProduct&) = default;
};

/// Exact product table of the 2x2 Pauli matrices: XY = iZ, YZ = iX, ZX = iY,
/// reversed orders pick up -i, and every operator squares to I.
SingleProduct single_mul(PauliOp a, PauliOp b) noexcept;

inline constexpr int kMaxPauliQubits = 8;

/// phase * (op_1 ⊗ op_2 ⊗ ... ⊗ op_n). Qubit 1 is the leftmost factor and is
/// stored at word()[0].
class PauliString {
public:
    explicit PauliString(std::vector<PauliOp> word, Phase phase = Phase::plus_one());

    static PauliString identity(int n_qubits);
    /// `op` on a single qubit (1-based) of an n-qubit register.
    static PauliString single(int n_qubits, int qubit, PauliOp op);

    /// Accepts the rendered form "-1 · X⊗Y⊗Y" as well as compact variants
    /// such as "-XYY", "+i*X⊗Z" or "Y".
    static PauliString parse(std::string_view text);

    int n_qubits() const { return static_cast<int>(word_.size()); }
    Phase phase() const { return phase_; }
    const std::vector<PauliOp>& word() const { return word_; }
    PauliOp at(int index) const { return word_.at(static_cast<std::size_t>(index)); }
    bool is_identity_word() const;
    bool is_hermitian() const { return phase_.is_real(); }

    PauliString with_phase(Phase p) const;
    PauliString operator-() const { return with_phase(phase_ * Phase::minus_one()); }

    std::string str() const;

    friend bool operator==(const PauliString&, const PauliString&) = default;

private:
    Phase phase_;
    std::vector<PauliOp> word_;
};

PauliString mul(const PauliString& p, const PauliString& q);
inline PauliString operator*(const PauliString& p, const PauliString& q) { return mul(p, q); }

/// True iff the number of sites where both strings act with different
/// non-identity operators is even.
bool commutes(const PauliString& p, const PauliString& q);

/// A PauliString restricted to phase ±1, i.e. a Hermitian observable.
class Observable {
public:
    explicit Observable(PauliString op);

    const PauliString& op() const { return op_; }
    int n_qubits() const { return op_.n_qubits(); }
    std::string str() const { return op_.str(); }

    friend bool operator==(const Observable&, const Observable&) = default;

private:
    PauliString op_;
};

/// The three-particle GHZ operators and the per-particle groupings of their
/// factors (`hat`), each embedded in the three-qubit register.
struct GhzOperators {
    PauliString a1, a2, a3, a4;
    PauliString hat1, hat2, hat3;
};

GhzOperators ghz_operators();

}  // namespace ghzlab
