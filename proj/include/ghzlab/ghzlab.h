/*
 * C interface to the ghzlab library.
 *
 * Objects are opaque handles created by *_new / *_make / *_parse functions
 * and released with the matching *_free function; passing NULL to a free
 * function is a no-op. Every fallible call returns a ghz_status. On failure,
 * ghz_last_error() returns a message describing the most recent error on the
 * calling thread; it stays valid until the next failing call on that thread.
 */
#ifndef GHZLAB_H
#define GHZLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GHZLAB_API __declspec(dllexport)
#else
#define GHZLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ghz_status {
    GHZ_OK = 0,
    GHZ_ERR_INVALID_ARGUMENT = 1,
    GHZ_ERR_DIMENSION_MISMATCH = 2,
    GHZ_ERR_NON_HERMITIAN = 3,
    GHZ_ERR_UNASSIGNED = 4,
    GHZ_ERR_LIMIT_EXCEEDED = 5,
    GHZ_ERR_ZERO_PROBABILITY = 6,
    GHZ_ERR_PARSE = 7,
    GHZ_ERR_IO = 8,
    GHZ_ERR_NULL_POINTER = 9,
    GHZ_ERR_BUFFER_TOO_SMALL = 10,
    GHZ_ERR_INTERNAL = 11
} ghz_status;

GHZLAB_API const char* ghz_version(void);
GHZLAB_API const char* ghz_status_string(ghz_status status);
GHZLAB_API const char* ghz_last_error(void);

/* ------------------------------------------------------------ Pauli strings */

typedef struct ghz_pauli ghz_pauli;

/* "-1 · X⊗Y⊗Y", "-XYY", "+i*Z" and similar. */
GHZLAB_API ghz_status ghz_pauli_parse(const char* text, ghz_pauli** out);
/* "A1".."A4", "Ahat1".."Ahat3", or any string accepted by ghz_pauli_parse. */
GHZLAB_API ghz_status ghz_pauli_named(const char* name, ghz_pauli** out);
GHZLAB_API ghz_status ghz_pauli_mul(const ghz_pauli* p, const ghz_pauli* q, ghz_pauli** out);
GHZLAB_API ghz_status ghz_pauli_commutes(const ghz_pauli* p, const ghz_pauli* q, int* out);
GHZLAB_API ghz_status ghz_pauli_n_qubits(const ghz_pauli* p, int* out);
/* Phase as the exponent k of i^k, k in 0..3. */
GHZLAB_API ghz_status ghz_pauli_phase_exponent(const ghz_pauli* p, int* out);
/* Writes the rendered form with a terminating NUL. *required receives the
 * buffer size needed, including the NUL, even when cap is too small. */
GHZLAB_API ghz_status ghz_pauli_to_string(const ghz_pauli* p, char* buf, size_t cap, size_t* required);
GHZLAB_API void ghz_pauli_free(ghz_pauli* p);

/* ------------------------------------------------------------------ States */

typedef struct ghz_state ghz_state;

typedef enum ghz_state_kind {
    GHZ_STATE_GHZ = 0,     /* (|ααα> - |βββ>)/√2 */
    GHZ_STATE_PRODUCT = 1, /* 2^(-3/2)(|α>-|β>)^⊗3 */
    GHZ_STATE_SINGLE = 2,  /* (|α> - |β>)/√2 */
    GHZ_STATE_SINGLET = 3  /* (|αβ> - |βα>)/√2 */
} ghz_state_kind;

GHZLAB_API ghz_status ghz_state_make(ghz_state_kind kind, ghz_state** out);
/* re_im holds n_amplitudes interleaved (re, im) pairs; the norm must be 1. */
GHZLAB_API ghz_status ghz_state_from_amplitudes(const double* re_im, size_t n_amplitudes, ghz_state** out);
GHZLAB_API ghz_status ghz_state_n_qubits(const ghz_state* s, int* out);
/* Copies up to cap amplitudes as (re, im) pairs; *n receives the dimension. */
GHZLAB_API ghz_status ghz_state_amplitudes(const ghz_state* s, double* re_im, size_t cap, size_t* n);
GHZLAB_API ghz_status ghz_state_apply(const ghz_pauli* p, const ghz_state* s, ghz_state** out);
GHZLAB_API ghz_status ghz_state_eigencheck(const ghz_pauli* p, const ghz_state* s, double tol, int* is_eigenstate,
                                           int* eigenvalue, double* residual);
GHZLAB_API ghz_status ghz_state_expectation(const ghz_pauli* p, const ghz_state* s, double* out);
GHZLAB_API void ghz_state_free(ghz_state* s);

/* ------------------------------------------------------------- Measurement */

/* Measures observables[0..count) in order. outcomes and probabilities must
 * hold count entries. final_state may be NULL. */
GHZLAB_API ghz_status ghz_measure_sequence(const ghz_state* s, const ghz_pauli* const* observables, size_t count,
                                           uint64_t seed, int* outcomes, double* probabilities,
                                           ghz_state** final_state);

/* -------------------------------------------------------- Counterfactuals */

/* Exhaustive enumeration of the four GHZ sign constraints. */
GHZLAB_API ghz_status ghz_counterfactual_ghz(uint64_t* assignments_checked, uint64_t* satisfying);

/* --------------------------------------------------------------------- Bell */

/* Columns hold n entries of +1 or -1. Results are scaled by n, so they are
 * exact integers. */
GHZLAB_API ghz_status ghz_cross_correlation(const int8_t* a, const int8_t* b, size_t n, int64_t* sum);
GHZLAB_API ghz_status ghz_bell3_margin(const int8_t* a, const int8_t* b, const int8_t* c, size_t n,
                                       int64_t* margin_scaled);
GHZLAB_API ghz_status ghz_chsh4(const int8_t* a, const int8_t* a2, const int8_t* b, const int8_t* b2, size_t n,
                                int64_t* s_scaled);

/* ------------------------------------------------------------------ Reports */

typedef struct ghz_options ghz_options;
typedef struct ghz_report ghz_report;

GHZLAB_API size_t ghz_subcommand_count(void);
GHZLAB_API const char* ghz_subcommand_name(size_t index);

GHZLAB_API ghz_status ghz_options_new(const char* subcommand, ghz_options** out);
GHZLAB_API ghz_status ghz_options_set_seed(ghz_options* o, uint64_t seed);
GHZLAB_API ghz_status ghz_options_set_trials(ghz_options* o, uint64_t trials);
GHZLAB_API ghz_status ghz_options_set_deterministic(ghz_options* o, int deterministic);
/* key: "input", "metadata", "state", "sequence", "compare" or "angles". */
GHZLAB_API ghz_status ghz_options_set_string(ghz_options* o, const char* key, const char* value);
GHZLAB_API void ghz_options_free(ghz_options* o);

GHZLAB_API ghz_status ghz_report_run(const ghz_options* o, ghz_report** out);
/* 1 when every claim in the report verified, 0 otherwise. */
GHZLAB_API int ghz_report_passed(const ghz_report* r);
/* Owned by the report; valid until ghz_report_free. */
GHZLAB_API const char* ghz_report_json(const ghz_report* r);
GHZLAB_API const char* ghz_report_text(const ghz_report* r);
GHZLAB_API void ghz_report_free(ghz_report* r);

#ifdef __cplusplus
}
#endif

#endif /* GHZLAB_H */
