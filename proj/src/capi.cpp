#include "ghzlab/ghzlab.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "ghzlab/bell.hpp"
#include "ghzlab/counterfactual.hpp"
#include "ghzlab/error.hpp"
#include "ghzlab/measurement.hpp"
#include "ghzlab/report.hpp"

struct ghz_pauli {
    ghzlab::PauliString value;
};

struct ghz_state {
    ghzlab::StateVector value;
};

struct ghz_options {
    ghzlab::ReportOptions value;
};

struct ghz_report {
    bool passed;
    std::string json;
    std::string text;
};

namespace {

thread_local std::string last_error;

ghz_status status_for(ghzlab::ErrorCode code) {
    using ghzlab::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return GHZ_ERR_INVALID_ARGUMENT;
        case ErrorCode::DimensionMismatch: return GHZ_ERR_DIMENSION_MISMATCH;
        case ErrorCode::NonHermitian: return GHZ_ERR_NON_HERMITIAN;
        case ErrorCode::Unassigned: return GHZ_ERR_UNASSIGNED;
        case ErrorCode::LimitExceeded: return GHZ_ERR_LIMIT_EXCEEDED;
        case ErrorCode::ZeroProbabilityBranch: return GHZ_ERR_ZERO_PROBABILITY;
        case ErrorCode::Parse: return GHZ_ERR_PARSE;
        case ErrorCode::Io: return GHZ_ERR_IO;
    }
    return GHZ_ERR_INTERNAL;
}

ghz_status fail(ghz_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
ghz_status guarded(F&& body) {
    try {
        body();
        return GHZ_OK;
    } catch (const ghzlab::Error& e) {
        return fail(status_for(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(GHZ_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(GHZ_ERR_INTERNAL, e.what());
    }
}

ghz_status null_arg(const char* name) { return fail(GHZ_ERR_NULL_POINTER, std::string(name) + " is NULL"); }

#define GHZ_REQUIRE(ptr)                          \
    do {                                          \
        if ((ptr) == nullptr) return null_arg(#ptr); \
    } while (0)

ghzlab::Column to_column(const int8_t* data, size_t n) { return ghzlab::Column(data, data + n); }

}  // namespace

extern "C" {

const char* ghz_version(void) { return ghzlab::version(); }

const char* ghz_status_string(ghz_status status) {
    switch (status) {
        case GHZ_OK: return "ok";
        case GHZ_ERR_INVALID_ARGUMENT: return "invalid argument";
        case GHZ_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
        case GHZ_ERR_NON_HERMITIAN: return "non-Hermitian observable";
        case GHZ_ERR_UNASSIGNED: return "unassigned variable";
        case GHZ_ERR_LIMIT_EXCEEDED: return "limit exceeded";
        case GHZ_ERR_ZERO_PROBABILITY: return "zero-probability branch";
        case GHZ_ERR_PARSE: return "parse error";
        case GHZ_ERR_IO: return "I/O error";
        case GHZ_ERR_NULL_POINTER: return "null pointer";
        case GHZ_ERR_BUFFER_TOO_SMALL: return "buffer too small";
        case GHZ_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* ghz_last_error(void) { return last_error.c_str(); }

ghz_status ghz_pauli_parse(const char* text, ghz_pauli** out) {
    GHZ_REQUIRE(text);
    GHZ_REQUIRE(out);
    return guarded([&] { *out = new ghz_pauli{ghzlab::PauliString::parse(text)}; });
}

ghz_status ghz_pauli_named(const char* name, ghz_pauli** out) {
    GHZ_REQUIRE(name);
    GHZ_REQUIRE(out);
    return guarded([&] { *out = new ghz_pauli{ghzlab::named_operator(name)}; });
}

ghz_status ghz_pauli_mul(const ghz_pauli* p, const ghz_pauli* q, ghz_pauli** out) {
    GHZ_REQUIRE(p);
    GHZ_REQUIRE(q);
    GHZ_REQUIRE(out);
    return guarded([&] { *out = new ghz_pauli{ghzlab::mul(p->value, q->value)}; });
}

ghz_status ghz_pauli_commutes(const ghz_pauli* p, const ghz_pauli* q, int* out) {
    GHZ_REQUIRE(p);
    GHZ_REQUIRE(q);
    GHZ_REQUIRE(out);
    return guarded([&] { *out = ghzlab::commutes(p->value, q->value) ? 1 : 0; });
}

ghz_status ghz_pauli_n_qubits(const ghz_pauli* p, int* out) {
    GHZ_REQUIRE(p);
    GHZ_REQUIRE(out);
    *out = p->value.n_qubits();
    return GHZ_OK;
}

ghz_status ghz_pauli_phase_exponent(const ghz_pauli* p, int* out) {
    GHZ_REQUIRE(p);
    GHZ_REQUIRE(out);
    *out = p->value.phase().exponent();
    return GHZ_OK;
}

ghz_status ghz_pauli_to_string(const ghz_pauli* p, char* buf, size_t cap, size_t* required) {
    GHZ_REQUIRE(p);
    const std::string s = p->value.str();
    if (required != nullptr) *required = s.size() + 1;
    if (buf == nullptr || cap < s.size() + 1) {
        return fail(GHZ_ERR_BUFFER_TOO_SMALL, "buffer needs " + std::to_string(s.size() + 1) + " bytes");
    }
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return GHZ_OK;
}

void ghz_pauli_free(ghz_pauli* p) { delete p; }

ghz_status ghz_state_make(ghz_state_kind kind, ghz_state** out) {
    GHZ_REQUIRE(out);
    return guarded([&] {
        switch (kind) {
            case GHZ_STATE_GHZ: *out = new ghz_state{ghzlab::make_ghz_state()}; return;
            case GHZ_STATE_PRODUCT: *out = new ghz_state{ghzlab::make_product_state()}; return;
            case GHZ_STATE_SINGLE: *out = new ghz_state{ghzlab::make_single_state()}; return;
            case GHZ_STATE_SINGLET: *out = new ghz_state{ghzlab::make_singlet_state()}; return;
        }
        throw ghzlab::Error(ghzlab::ErrorCode::InvalidArgument, "unknown state kind");
    });
}

ghz_status ghz_state_from_amplitudes(const double* re_im, size_t n_amplitudes, ghz_state** out) {
    GHZ_REQUIRE(re_im);
    GHZ_REQUIRE(out);
    return guarded([&] {
        std::vector<ghzlab::Amplitude> amps(n_amplitudes);
        for (size_t i = 0; i < n_amplitudes; ++i) amps[i] = {re_im[2 * i], re_im[2 * i + 1]};
        *out = new ghz_state{ghzlab::StateVector::from_amplitudes(std::move(amps))};
    });
}

ghz_status ghz_state_n_qubits(const ghz_state* s, int* out) {
    GHZ_REQUIRE(s);
    GHZ_REQUIRE(out);
    *out = s->value.n_qubits();
    return GHZ_OK;
}

ghz_status ghz_state_amplitudes(const ghz_state* s, double* re_im, size_t cap, size_t* n) {
    GHZ_REQUIRE(s);
    const size_t dim = s->value.dimension();
    if (n != nullptr) *n = dim;
    if (re_im == nullptr || cap < dim) return fail(GHZ_ERR_BUFFER_TOO_SMALL, "amplitude buffer too small");
    for (size_t i = 0; i < dim; ++i) {
        re_im[2 * i] = s->value.amplitudes()[i].real();
        re_im[2 * i + 1] = s->value.amplitudes()[i].imag();
    }
    return GHZ_OK;
}

ghz_status ghz_state_apply(const ghz_pauli* p, const ghz_state* s, ghz_state** out) {
    GHZ_REQUIRE(p);
    GHZ_REQUIRE(s);
    GHZ_REQUIRE(out);
    return guarded([&] { *out = new ghz_state{ghzlab::apply(p->value, s->value)}; });
}

ghz_status ghz_state_eigencheck(const ghz_pauli* p, const ghz_state* s, double tol, int* is_eigenstate,
                                int* eigenvalue, double* residual) {
    GHZ_REQUIRE(p);
    GHZ_REQUIRE(s);
    return guarded([&] {
        const ghzlab::EigenReport e = ghzlab::eigencheck(p->value, s->value, tol);
        if (is_eigenstate != nullptr) *is_eigenstate = e.is_eigenstate ? 1 : 0;
        if (eigenvalue != nullptr) *eigenvalue = e.eigenvalue;
        if (residual != nullptr) *residual = e.residual;
    });
}

ghz_status ghz_state_expectation(const ghz_pauli* p, const ghz_state* s, double* out) {
    GHZ_REQUIRE(p);
    GHZ_REQUIRE(s);
    GHZ_REQUIRE(out);
    return guarded([&] { *out = ghzlab::expectation(p->value, s->value); });
}

void ghz_state_free(ghz_state* s) { delete s; }

ghz_status ghz_measure_sequence(const ghz_state* s, const ghz_pauli* const* observables, size_t count, uint64_t seed,
                                int* outcomes, double* probabilities, ghz_state** final_state) {
    GHZ_REQUIRE(s);
    if (count > 0) {
        GHZ_REQUIRE(observables);
        GHZ_REQUIRE(outcomes);
        GHZ_REQUIRE(probabilities);
    }
    return guarded([&] {
        std::vector<ghzlab::Observable> seq;
        seq.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            if (observables[i] == nullptr) throw ghzlab::Error(ghzlab::ErrorCode::InvalidArgument, "NULL observable");
            seq.emplace_back(observables[i]->value);
        }
        ghzlab::SequenceResult r = ghzlab::run_sequence(s->value, seq, seed);
        for (size_t i = 0; i < count; ++i) {
            outcomes[i] = r.records[i].outcome;
            probabilities[i] = r.records[i].probability;
        }
        if (final_state != nullptr) *final_state = new ghz_state{std::move(r.final_state)};
    });
}

ghz_status ghz_counterfactual_ghz(uint64_t* assignments_checked, uint64_t* satisfying) {
    GHZ_REQUIRE(assignments_checked);
    GHZ_REQUIRE(satisfying);
    return guarded([&] {
        std::vector<ghzlab::Constraint> cs = ghzlab::ghz_constraints();
        cs.push_back(ghzlab::ghz_x_constraint());
        const ghzlab::EnumerationReport r = ghzlab::enumerate(cs);
        *assignments_checked = r.n_assignments_checked;
        *satisfying = r.satisfying.size();
    });
}

ghz_status ghz_cross_correlation(const int8_t* a, const int8_t* b, size_t n, int64_t* sum) {
    GHZ_REQUIRE(a);
    GHZ_REQUIRE(b);
    GHZ_REQUIRE(sum);
    return guarded([&] { *sum = ghzlab::cross_correlation(to_column(a, n), to_column(b, n)).sum; });
}

ghz_status ghz_bell3_margin(const int8_t* a, const int8_t* b, const int8_t* c, size_t n, int64_t* margin_scaled) {
    GHZ_REQUIRE(a);
    GHZ_REQUIRE(b);
    GHZ_REQUIRE(c);
    GHZ_REQUIRE(margin_scaled);
    return guarded([&] {
        *margin_scaled = ghzlab::bell3_check(to_column(a, n), to_column(b, n), to_column(c, n)).margin_scaled;
    });
}

ghz_status ghz_chsh4(const int8_t* a, const int8_t* a2, const int8_t* b, const int8_t* b2, size_t n,
                     int64_t* s_scaled) {
    GHZ_REQUIRE(a);
    GHZ_REQUIRE(a2);
    GHZ_REQUIRE(b);
    GHZ_REQUIRE(b2);
    GHZ_REQUIRE(s_scaled);
    return guarded([&] {
        *s_scaled =
            ghzlab::chsh4_check(to_column(a, n), to_column(a2, n), to_column(b, n), to_column(b2, n)).s_scaled;
    });
}

size_t ghz_subcommand_count(void) { return ghzlab::subcommands().size(); }

const char* ghz_subcommand_name(size_t index) {
    const auto& names = ghzlab::subcommands();
    return index < names.size() ? names[index].c_str() : nullptr;
}

ghz_status ghz_options_new(const char* subcommand, ghz_options** out) {
    GHZ_REQUIRE(subcommand);
    GHZ_REQUIRE(out);
    const auto& names = ghzlab::subcommands();
    if (std::find(names.begin(), names.end(), subcommand) == names.end()) {
        return fail(GHZ_ERR_INVALID_ARGUMENT, std::string("unknown subcommand '") + subcommand + "'");
    }
    return guarded([&] {
        auto* o = new ghz_options{};
        o->value.subcommand = subcommand;
        *out = o;
    });
}

ghz_status ghz_options_set_seed(ghz_options* o, uint64_t seed) {
    GHZ_REQUIRE(o);
    o->value.seed = seed;
    return GHZ_OK;
}

ghz_status ghz_options_set_trials(ghz_options* o, uint64_t trials) {
    GHZ_REQUIRE(o);
    if (trials == 0) return fail(GHZ_ERR_INVALID_ARGUMENT, "trials must be at least 1");
    o->value.trials = trials;
    return GHZ_OK;
}

ghz_status ghz_options_set_deterministic(ghz_options* o, int deterministic) {
    GHZ_REQUIRE(o);
    o->value.deterministic = deterministic != 0;
    return GHZ_OK;
}

ghz_status ghz_options_set_string(ghz_options* o, const char* key, const char* value) {
    GHZ_REQUIRE(o);
    GHZ_REQUIRE(key);
    GHZ_REQUIRE(value);
    const std::string k = key;
    ghzlab::ReportOptions& v = o->value;
    if (k == "input") {
        v.input = value;
    } else if (k == "metadata") {
        v.metadata = value;
    } else if (k == "state") {
        v.state = value;
    } else if (k == "sequence") {
        v.sequence = value;
    } else if (k == "compare") {
        v.compare = value;
    } else if (k == "angles") {
        v.angles = value;
    } else {
        return fail(GHZ_ERR_INVALID_ARGUMENT, "unknown option key '" + k + "'");
    }
    return GHZ_OK;
}

void ghz_options_free(ghz_options* o) { delete o; }

ghz_status ghz_report_run(const ghz_options* o, ghz_report** out) {
    GHZ_REQUIRE(o);
    GHZ_REQUIRE(out);
    return guarded([&] {
        const ghzlab::Report r = ghzlab::run_report(o->value);
        *out = new ghz_report{r.passed(), r.to_json(o->value.deterministic).dump(2) + "\n", r.to_text()};
    });
}

int ghz_report_passed(const ghz_report* r) { return (r != nullptr && r->passed) ? 1 : 0; }

const char* ghz_report_json(const ghz_report* r) { return r != nullptr ? r->json.c_str() : nullptr; }

const char* ghz_report_text(const ghz_report* r) { return r != nullptr ? r->text.c_str() : nullptr; }

void ghz_report_free(ghz_report* r) { delete r; }

}  // extern "C"
