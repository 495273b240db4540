/*
 * sftid C API
 *
 * Identification of subshift-of-finite-type grammars from Gibbs samples.
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an sftid_status;
 * on failure sftid_last_error() describes the problem (thread-local, valid
 * until the next call on the same thread). Strings returned through char**
 * out-parameters are heap-allocated and released with sftid_string_free().
 */
#ifndef SFTID_H
#define SFTID_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SFTID_BUILDING)
#    define SFTID_API __declspec(dllexport)
#  else
#    define SFTID_API __declspec(dllimport)
#  endif
#else
#  define SFTID_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sftid_status {
    SFTID_OK = 0,
    SFTID_ERR_INVALID = 1,   /* bad input, schema or precondition */
    SFTID_ERR_NUMERICAL = 2, /* eigen-solve or bisection failure */
    SFTID_ERR_INTERNAL = 3
} sftid_status;

typedef enum sftid_order {
    SFTID_ORDER_LESS = 0,
    SFTID_ORDER_GREATER = 1,
    SFTID_ORDER_EQUAL = 2,
    SFTID_ORDER_INCOMPARABLE = 3
} sftid_order;

typedef struct sftid_grammar sftid_grammar;
typedef struct sftid_grammar_list sftid_grammar_list;
typedef struct sftid_potential sftid_potential;
typedef struct sftid_chain sftid_chain;

SFTID_API const char* sftid_version(void);
SFTID_API const char* sftid_last_error(void);
SFTID_API void sftid_string_free(char* s);

/* Grammars ---------------------------------------------------------------- */

/* entries: theta*theta row-major 0/1 values. Fails unless primitive. */
SFTID_API sftid_status sftid_grammar_create(int theta, const int* entries, sftid_grammar** out);
SFTID_API sftid_status sftid_grammar_from_json(const char* json, sftid_grammar** out);
SFTID_API sftid_status sftid_grammar_to_json(const sftid_grammar* g, char** out);
SFTID_API sftid_status sftid_grammar_clone(const sftid_grammar* g, sftid_grammar** out);
SFTID_API int sftid_grammar_theta(const sftid_grammar* g);
SFTID_API sftid_status sftid_grammar_compare(const sftid_grammar* g, const sftid_grammar* h, sftid_order* out);
SFTID_API sftid_status sftid_grammar_admits(const sftid_grammar* g, const int* word, size_t len, int* out);
SFTID_API void sftid_grammar_free(sftid_grammar* g);

/* Primitivity of an arbitrary square 0/1 matrix (no grammar required). */
SFTID_API sftid_status sftid_is_primitive(int theta, const int* entries, int* out);

/* Minimal 0/1 matrix admitting the word; written to entries[theta*theta]. */
SFTID_API sftid_status sftid_transition_closure(int theta, const int* word, size_t len, int* entries);

/* Grammar lists ----------------------------------------------------------- */

/* Every primitive theta x theta grammar, theta <= 4. */
SFTID_API sftid_status sftid_grammar_list_enumerate(int theta, sftid_grammar_list** out);
/* Array of grammar objects or {"grammars": [...]}. */
SFTID_API sftid_status sftid_grammar_list_from_json(const char* json, sftid_grammar_list** out);
SFTID_API sftid_status sftid_grammar_list_to_json(const sftid_grammar_list* list, char** out);
SFTID_API size_t sftid_grammar_list_size(const sftid_grammar_list* list);
/* Copy of element i. */
SFTID_API sftid_status sftid_grammar_list_get(const sftid_grammar_list* list, size_t i, sftid_grammar** out);
SFTID_API void sftid_grammar_list_free(sftid_grammar_list* list);

/* Potentials -------------------------------------------------------------- */

SFTID_API sftid_status sftid_potential_zero(int theta, int range, sftid_potential** out);
SFTID_API sftid_status sftid_potential_from_json(const char* json, sftid_potential** out);
SFTID_API sftid_status sftid_potential_to_json(const sftid_potential* phi, char** out);
SFTID_API int sftid_potential_theta(const sftid_potential* phi);
SFTID_API int sftid_potential_range(const sftid_potential* phi);
SFTID_API void sftid_potential_free(sftid_potential* phi);

/* Gibbs chains ------------------------------------------------------------ */

SFTID_API sftid_status sftid_chain_create(const sftid_grammar* g, const sftid_potential* phi, sftid_chain** out);
SFTID_API double sftid_chain_pressure(const sftid_chain* c);
SFTID_API double sftid_chain_entropy(const sftid_chain* c);
SFTID_API double sftid_chain_lambda(const sftid_chain* c);
/* {"pressure": ..., "entropy": ..., "lambda": ...} */
SFTID_API sftid_status sftid_chain_summary_json(const sftid_chain* c, char** out);
/* Writes n symbols to word_out. Deterministic in seed. */
SFTID_API sftid_status sftid_chain_sample(const sftid_chain* c, size_t n, uint64_t seed, int* word_out);
/* -INFINITY for inadmissible words. */
SFTID_API sftid_status sftid_chain_cylinder_log_measure(const sftid_chain* c, const int* word, size_t len,
                                                        double* out);
SFTID_API sftid_status sftid_chain_expected_potential(const sftid_chain* c, double* out);
SFTID_API void sftid_chain_free(sftid_chain* c);

SFTID_API sftid_status sftid_entropy_via_pressure_derivative(const sftid_grammar* g, const sftid_potential* phi,
                                                             double* out);

/* Identification and experiments ------------------------------------------ */

/* Both identification sets as result JSON. candidates == NULL means every
 * primitive grammar on the potential's lexicon. */
SFTID_API sftid_status sftid_identify_json(const int* word, size_t len, const sftid_potential* phi,
                                           const sftid_grammar_list* candidates, double tie_tolerance,
                                           char** out);

/* Runs the experiment described by config_json. Either output may be NULL.
 * wall_seconds (may be NULL) receives the run time, which is not part of the
 * report. */
SFTID_API sftid_status sftid_experiment_run(const char* config_json, char** report_json, char** curve_csv,
                                            double* wall_seconds);

#ifdef __cplusplus
}
#endif

#endif
