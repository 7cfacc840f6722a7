#ifndef UNIQSUB_H
#define UNIQSUB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UsStatus {
  US_STATUS_OK = 0,
  US_STATUS_NULL_POINTER = 1,
  US_STATUS_INVALID_UTF8 = 2,
  US_STATUS_GRAPH6 = 3,
  US_STATUS_DOMAIN = 4,
  US_STATUS_RESOURCE = 5,
  US_STATUS_IO = 6,
  US_STATUS_PANIC = 7,
} UsStatus;

// Opaque graph handle.
typedef struct UsGraph UsGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer
// stays valid until the next `us_*` call on the same thread.
const char *us_last_error_message(void);

// # Safety
// `s` must be NULL or a string returned by this library, freed once.
void us_string_free(char *s);

// Library version as a static string.
const char *us_version(void);

// # Safety
// `text` must be a nul-terminated string and `out` a valid pointer.
enum UsStatus us_graph_from_graph6(const char *text, struct UsGraph **out);

// # Safety
// `g` must be NULL or a handle from this library, freed once.
void us_graph_free(struct UsGraph *g);

// # Safety
// Pointers must be valid.
enum UsStatus us_graph_order(const struct UsGraph *g, uint32_t *out);

// # Safety
// Pointers must be valid.
enum UsStatus us_graph_edge_count(const struct UsGraph *g, uint32_t *out);

// # Safety
// Pointers must be valid.
enum UsStatus us_graph_to_graph6(const struct UsGraph *g, char **out);

// # Safety
// Pointers must be valid.
enum UsStatus us_graph_complement(const struct UsGraph *g, struct UsGraph **out);

// Canonical form as graph6 of the canonically relabelled graph.
//
// # Safety
// Pointers must be valid.
enum UsStatus us_canonical_graph6(const struct UsGraph *g, char **out);

// # Safety
// Pointers must be valid.
enum UsStatus us_aut_order(const struct UsGraph *g, uint64_t *out);

// # Safety
// Pointers must be valid.
enum UsStatus us_are_isomorphic(const struct UsGraph *a, const struct UsGraph *b, bool *out);

// Exact number of embeddings of `g` into `h`, as a decimal string.
//
// # Safety
// Pointers must be valid.
enum UsStatus us_count_embeddings(const struct UsGraph *g, const struct UsGraph *h, char **out);

// Whether `g` has exactly one embedding into `h` (equal orders required).
//
// # Safety
// Pointers must be valid.
enum UsStatus us_has_unique_embedding(const struct UsGraph *g, const struct UsGraph *h, bool *out);

// Whether `h` contains exactly one subgraph isomorphic to `g`.
//
// # Safety
// Pointers must be valid.
enum UsStatus us_is_unique_subgraph(const struct UsGraph *g, const struct UsGraph *h, bool *out);

// `f(h)` as a JSON object.
//
// # Safety
// Pointers must be valid.
enum UsStatus us_f_of_h_json(const struct UsGraph *h,
                             bool spanning_only,
                             bool allow_large,
                             char **out);

// Monte-Carlo estimate of the unique-embedding probability, as JSON.
//
// # Safety
// Pointers must be valid.
enum UsStatus us_estimate_json(const struct UsGraph *h, uint64_t trials, uint64_t seed, char **out);

// `exp(-2 t^2 / sum b_i^2)`.
//
// # Safety
// `b` must point to `len` doubles (it may be NULL when `len` is 0).
enum UsStatus us_azuma_tail(double t, const double *b, size_t len, double *out);

// `n! * 2^(e_h - N)` as an exact fraction string.
//
// # Safety
// `out` must be valid.
enum UsStatus us_expected_embeddings(uint32_t n, uint32_t e_h, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNIQSUB_H */
