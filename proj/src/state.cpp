#include "ghzlab/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ghzlab/error.hpp"

namespace ghzlab {

namespace {

int qubits_for_dimension(std::size_t dim) {
    for (int n = 1; n <= kMaxStateQubits; ++n) {
        if (dim == (std::size_t{1} << n)) return n;
    }
    throw Error(ErrorCode::InvalidArgument,
                "state dimension " + std::to_string(dim) + " is not 2^n for n in 1..3");
}

void check_dimensions(const PauliString& p, int n_qubits) {
    if (p.n_qubits() != n_qubits) {
        throw Error(ErrorCode::DimensionMismatch,
                    "operator " + p.str() + " acts on " + std::to_string(p.n_qubits()) +
                        " qubits but the state has " + std::to_string(n_qubits));
    }
}

double raw_norm(std::span<const Amplitude> amps) {
    double sum = 0.0;
    for (const Amplitude& a : amps) sum += std::norm(a);
    return std::sqrt(sum);
}

}  // namespace

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes) {
    const int n = qubits_for_dimension(amplitudes.size());
    const double nrm = raw_norm(amplitudes);
    if (std::abs(nrm - 1.0) > kTolerance) {
        throw Error(ErrorCode::InvalidArgument,
                    "state is not normalized (norm " + std::to_string(nrm) + ")");
    }
    return StateVector(n, std::move(amplitudes));
}

StateVector StateVector::normalized(std::vector<Amplitude> amplitudes) {
    const int n = qubits_for_dimension(amplitudes.size());
    const double nrm = raw_norm(amplitudes);
    if (nrm == 0.0) throw Error(ErrorCode::InvalidArgument, "cannot normalize the zero vector");
    for (Amplitude& a : amplitudes) a /= nrm;
    return StateVector(n, std::move(amplitudes));
}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
    if (n_qubits < 1 || n_qubits > kMaxStateQubits) {
        throw Error(ErrorCode::InvalidArgument, "basis state needs 1..3 qubits");
    }
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (index >= dim) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
    std::vector<Amplitude> amps(dim);
    amps[index] = 1.0;
    return StateVector(n_qubits, std::move(amps));
}

double StateVector::norm() const { return raw_norm(amplitudes_); }

StateVector make_ghz_state() {
    const double h = 1.0 / std::sqrt(2.0);
    std::vector<Amplitude> amps(8);
    amps[0] = h;
    amps[7] = -h;
    return StateVector::from_amplitudes(std::move(amps));
}

StateVector make_product_state() {
    const double h = std::pow(2.0, -1.5);
    std::vector<Amplitude> amps(8);
    for (std::size_t b = 0; b < 8; ++b) {
        amps[b] = (std::popcount(b) % 2 == 0) ? h : -h;
    }
    return StateVector::from_amplitudes(std::move(amps));
}

StateVector make_single_state() {
    const double h = 1.0 / std::sqrt(2.0);
    return StateVector::from_amplitudes({h, -h});
}

StateVector make_singlet_state() {
    const double h = 1.0 / std::sqrt(2.0);
    return StateVector::from_amplitudes({0.0, h, -h, 0.0});
}

std::vector<Amplitude> apply_raw(const PauliString& p, std::span<const Amplitude> amplitudes) {
    const int n = p.n_qubits();
    if (amplitudes.size() != (std::size_t{1} << n)) {
        throw Error(ErrorCode::DimensionMismatch, "operator and amplitude vector sizes differ");
    }
    const Amplitude i_unit(0.0, 1.0);
    std::vector<Amplitude> out(amplitudes.size());
    for (std::size_t b = 0; b < amplitudes.size(); ++b) {
        Amplitude factor = p.phase().value();
        std::size_t target = b;
        for (int q = 0; q < n; ++q) {
            const std::size_t mask = std::size_t{1} << (n - 1 - q);
            const bool beta = (b & mask) != 0;
            switch (p.at(q)) {
                case PauliOp::I: break;
                case PauliOp::X: target ^= mask; break;
                case PauliOp::Y:
                    // σ_y|α⟩ = i|β⟩, σ_y|β⟩ = -i|α⟩
                    target ^= mask;
                    factor *= beta ? -i_unit : i_unit;
                    break;
                case PauliOp::Z:
                    if (beta) factor = -factor;
                    break;
            }
        }
        out[target] += factor * amplitudes[b];
    }
    return out;
}

StateVector apply(const PauliString& p, const StateVector& s) {
    check_dimensions(p, s.n_qubits());
    // Pauli strings are unitary, so the result stays normalized up to rounding.
    return StateVector::normalized(apply_raw(p, s.amplitudes()));
}

EigenReport eigencheck(const PauliString& p, const StateVector& s, double tol) {
    check_dimensions(p, s.n_qubits());
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
    const std::vector<Amplitude> image = apply_raw(p, s.amplitudes());
    double best = 0.0;
    int best_lambda = 0;
    for (int lambda : {1, -1}) {
        double sum = 0.0;
        for (std::size_t b = 0; b < image.size(); ++b) {
            sum += std::norm(image[b] - static_cast<double>(lambda) * s.amplitudes()[b]);
        }
        const double r = std::sqrt(sum);
        if (best_lambda == 0 || r < best) {
            best = r;
            best_lambda = lambda;
        }
    }
    EigenReport report;
    report.residual = best;
    report.is_eigenstate = best <= tol;
    report.eigenvalue = report.is_eigenstate ? best_lambda : 0;
    return report;
}

double expectation(const Observable& a, const StateVector& s) {
    check_dimensions(a.op(), s.n_qubits());
    const std::vector<Amplitude> image = apply_raw(a.op(), s.amplitudes());
    return inner_product(s.amplitudes(), image).real();
}

double expectation(const PauliString& p, const StateVector& s) {
    return expectation(Observable(p), s);
}

std::complex<double> inner_product(std::span<const Amplitude> bra, std::span<const Amplitude> ket) {
    if (bra.size() != ket.size()) throw Error(ErrorCode::DimensionMismatch, "vector sizes differ");
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < bra.size(); ++i) sum += std::conj(bra[i]) * ket[i];
    return sum;
}

double distance(const StateVector& a, const StateVector& b) {
    if (a.dimension() != b.dimension()) throw Error(ErrorCode::DimensionMismatch, "state sizes differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) sum += std::norm(a.amplitudes()[i] - b.amplitudes()[i]);
    return std::sqrt(sum);
}

StateVector normalize_global_phase(const StateVector& s) {
    std::size_t lead = 0;
    double lead_mag = -1.0;
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        const double m = std::abs(s.amplitudes()[i]);
        if (m > lead_mag + kTolerance) {
            lead = i;
            lead_mag = m;
        }
    }
    const Amplitude rot = std::conj(s.amplitudes()[lead]) / lead_mag;
    std::vector<Amplitude> amps(s.amplitudes().begin(), s.amplitudes().end());
    for (Amplitude& a : amps) a *= rot;
    amps[lead] = lead_mag;
    return StateVector::normalized(std::move(amps));
}

bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol) {
    if (a.dimension() != b.dimension()) return false;
    return std::abs(std::abs(inner_product(a.amplitudes(), b.amplitudes())) - 1.0) <= tol;
}

DensityMatrix2 single_qubit_marginal(const StateVector& s, int qubit) {
    const int n = s.n_qubits();
    if (qubit < 1 || qubit > n) throw Error(ErrorCode::InvalidArgument, "qubit index out of range");
    const std::size_t mask = std::size_t{1} << (n - qubit);
    DensityMatrix2 rho{};
    for (std::size_t b = 0; b < s.dimension(); ++b) {
        for (std::size_t c = 0; c < s.dimension(); ++c) {
            if ((b & ~mask) != (c & ~mask)) continue;
            const int r = (b & mask) ? 1 : 0;
            const int col = (c & mask) ? 1 : 0;
            rho[r][col] += s.amplitudes()[b] * std::conj(s.amplitudes()[c]);
        }
    }
    return rho;
}

nlohmann::json to_json(const StateVector& s) {
    nlohmann::json amps = nlohmann::json::array();
    for (const Amplitude& a : s.amplitudes()) amps.push_back({a.real(), a.imag()});
    return {{"n_qubits", s.n_qubits()}, {"amplitudes", std::move(amps)}};
}

StateVector state_from_json(const nlohmann::json& j) {
    try {
        const int n = j.at("n_qubits").get<int>();
        std::vector<Amplitude> amps;
        for (const auto& pair : j.at("amplitudes")) {
            if (!pair.is_array() || pair.size() != 2) {
                throw Error(ErrorCode::Parse, "amplitude entries must be [re, im] pairs");
            }
            amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
        StateVector s = StateVector::from_amplitudes(std::move(amps));
        if (s.n_qubits() != n) throw Error(ErrorCode::Parse, "n_qubits does not match amplitude count");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("malformed state JSON: ") + e.what());
    }
}

}  // namespace ghzlab
