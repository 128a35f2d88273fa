#include "ghzlab/pauli.hpp"

#include <array>
#include <cstddef>

#include "ghzlab/error.hpp"

namespace ghzlab {

namespace {

constexpr std::string_view kTensor = "\xE2\x8A\x97";  // ⊗
constexpr std::string_view kDot = "\xC2\xB7";         // ·

// Row: left operand, column: right operand. Entries are (exponent of i, op).
constexpr std::array<std::array<SingleProduct, 4>, 4> kTable = {{
    {{{Phase::plus_one(), PauliOp::I}, {Phase::plus_one(), PauliOp::X},
      {Phase::plus_one(), PauliOp::Y}, {Phase::plus_one(), PauliOp::Z}}},
    {{{Phase::plus_one(), PauliOp::X}, {Phase::plus_one(), PauliOp::I},
      {Phase::plus_i(), PauliOp::Z}, {Phase::minus_i(), PauliOp::Y}}},
    {{{Phase::plus_one(), PauliOp::Y}, {Phase::minus_i(), PauliOp::Z},
      {Phase::plus_one(), PauliOp::I}, {Phase::plus_i(), PauliOp::X}}},
    {{{Phase::plus_one(), PauliOp::Z}, {Phase::plus_i(), PauliOp::Y},
      {Phase::minus_i(), PauliOp::X}, {Phase::plus_one(), PauliOp::I}}},
}};

void check_qubits(int n) {
    if (n < 1 || n > kMaxPauliQubits) {
        throw Error(ErrorCode::InvalidArgument,
                    "Pauli string must act on 1.." + std::to_string(kMaxPauliQubits) +
                        " qubits, got " + std::to_string(n));
    }
}

void check_same_size(const PauliString& p, const PauliString& q) {
    if (p.n_qubits() != q.n_qubits()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "Pauli strings act on " + std::to_string(p.n_qubits()) + " and " +
                        std::to_string(q.n_qubits()) + " qubits");
    }
}

std::string strip_separators(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text.substr(i, kTensor.size()) == kTensor) {
            i += kTensor.size();
        } else if (text.substr(i, kDot.size()) == kDot) {
            i += kDot.size();
        } else {
            char c = text[i++];
            if (c != ' ' && c != '\t' && c != '*') out.push_back(c);
        }
    }
    return out;
}

}  // namespace

char to_char(PauliOp op) noexcept { return "IXYZ"[static_cast<int>(op)]; }

std::complex<double> Phase::value() const {
    switch (k_) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

std::string Phase::str() const {
    static constexpr std::array<const char*, 4> names = {"+1", "+i", "-1", "-i"};
    return names[k_];
}

SingleProduct single_mul(PauliOp a, PauliOp b) noexcept {
    return kTable[static_cast<int>(a)][static_cast<int>(b)];
}

PauliString::PauliString(std::vector<PauliOp> word, Phase phase)
    : phase_(phase), word_(std::move(word)) {
    check_qubits(static_cast<int>(word_.size()));
}

PauliString PauliString::identity(int n_qubits) {
    check_qubits(n_qubits);
    return PauliString(std::vector<PauliOp>(static_cast<std::size_t>(n_qubits), PauliOp::I));
}

PauliString PauliString::single(int n_qubits, int qubit, PauliOp op) {
    check_qubits(n_qubits);
    if (qubit < 1 || qubit > n_qubits) {
        throw Error(ErrorCode::InvalidArgument, "qubit index " + std::to_string(qubit) +
                                                    " outside 1.." + std::to_string(n_qubits));
    }
    std::vector<PauliOp> word(static_cast<std::size_t>(n_qubits), PauliOp::I);
    word[static_cast<std::size_t>(qubit - 1)] = op;
    return PauliString(std::move(word));
}

PauliString PauliString::parse(std::string_view text) {
    const std::string s = strip_separators(text);
    std::size_t pos = 0;
    int k = 0;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        if (s[pos] == '-') k += 2;
        ++pos;
    }
    if (pos < s.size() && s[pos] == '1') {
        ++pos;
    } else if (pos < s.size() && s[pos] == 'i') {
        k += 1;
        ++pos;
    }
    std::vector<PauliOp> word;
    for (; pos < s.size(); ++pos) {
        switch (s[pos]) {
            case 'I':
            case '_': word.push_back(PauliOp::I); break;
            case 'X': word.push_back(PauliOp::X); break;
            case 'Y': word.push_back(PauliOp::Y); break;
            case 'Z': word.push_back(PauliOp::Z); break;
            default:
                throw Error(ErrorCode::Parse, "unexpected character '" + std::string(1, s[pos]) +
                                                  "' in Pauli string \"" + std::string(text) + "\"");
        }
    }
    if (word.empty()) {
        throw Error(ErrorCode::Parse, "Pauli string \"" + std::string(text) + "\" has no operators");
    }
    if (static_cast<int>(word.size()) > kMaxPauliQubits) {
        throw Error(ErrorCode::Parse, "Pauli string \"" + std::string(text) + "\" is too long");
    }
    return PauliString(std::move(word), Phase::from_exponent(k));
}

bool PauliString::is_identity_word() const {
    for (PauliOp op : word_) {
        if (op != PauliOp::I) return false;
    }
    return true;
}

PauliString PauliString::with_phase(Phase p) const {
    PauliString out = *this;
    out.phase_ = p;
    return out;
}

std::string PauliString::str() const {
    std::string out = phase_.str();
    out += " ";
    out += kDot;
    out += " ";
    for (std::size_t i = 0; i < word_.size(); ++i) {
        if (i > 0) out += kTensor;
        out.push_back(to_char(word_[i]));
    }
    return out;
}

PauliString mul(const PauliString& p, const PauliString& q) {
    check_same_size(p, q);
    Phase phase = p.phase() * q.phase();
    std::vector<PauliOp> word(p.word().size());
    for (std::size_t i = 0; i < word.size(); ++i) {
        const SingleProduct site = single_mul(p.word()[i], q.word()[i]);
        phase = phase * site.phase;
        word[i] = site.op;
    }
    return PauliString(std::move(word), phase);
}

bool commutes(const PauliString& p, const PauliString& q) {
    check_same_size(p, q);
    int anticommuting_sites = 0;
    for (std::size_t i = 0; i < p.word().size(); ++i) {
        const PauliOp a = p.word()[i];
        const PauliOp b = q.word()[i];
        if (a != PauliOp::I && b != PauliOp::I && a != b) ++anticommuting_sites;
    }
    return anticommuting_sites % 2 == 0;
}

Observable::Observable(PauliString op) : op_(std::move(op)) {
    if (!op_.is_hermitian()) {
        throw Error(ErrorCode::NonHermitian,
                    "observable " + op_.str() + " has an imaginary phase and is not Hermitian");
    }
}

GhzOperators ghz_operators() {
    using enum PauliOp;
    PauliString a1({X, Y, Y});
    PauliString a2({Y, X, Y});
    PauliString a3({Y, Y, X});
    PauliString a4({X, X, X});

    // Particle k's grouping multiplies the k-th factors of A1, A2, A3 in order.
    const auto grouping = [&](int k) {
        const auto idx = static_cast<std::size_t>(k - 1);
        const PauliString f1 = PauliString::single(3, k, a1.word()[idx]);
        const PauliString f2 = PauliString::single(3, k, a2.word()[idx]);
        const PauliString f3 = PauliString::single(3, k, a3.word()[idx]);
        return f1 * f2 * f3;
    };
    return GhzOperators{a1, a2, a3, a4, grouping(1), grouping(2), grouping(3)};
}

}  // namespace ghzlab
