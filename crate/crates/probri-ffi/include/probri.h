#ifndef PROBRI_H
#define PROBRI_H

/* Generated by cbindgen from the probri-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every C-ABI call.
typedef enum ProbriStatus {
  PROBRI_STATUS_OK = 0,
  PROBRI_STATUS_NULL_POINTER = 1,
  PROBRI_STATUS_INVALID_UTF8 = 2,
  PROBRI_STATUS_INVALID_PARAMETERS = 3,
  PROBRI_STATUS_IO_ERROR = 4,
  PROBRI_STATUS_FORMAT_ERROR = 5,
  PROBRI_STATUS_UNKNOWN_WORD = 6,
  PROBRI_STATUS_CAPACITY_EXCEEDED = 7,
  PROBRI_STATUS_NOT_FOUND = 8,
  PROBRI_STATUS_INTERNAL_ERROR = 9,
} ProbriStatus;

// Opaque handle to a loaded semantic space.
typedef struct ProbriSpace ProbriSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *probri_version(void);

// Release a string allocated by this library. NULL is a no-op.
//
// # Safety
// `s` must have been returned by a probri function and not freed yet.
void probri_string_free(char *s);

// Representation capacity N(n, r, K) as a decimal string.
//
// # Safety
// `out_capacity` must be a valid pointer.
enum ProbriStatus probri_capacity(uint64_t n, uint64_t r, uint8_t k, char **out_capacity);

// Orthogonality probability of two context vectors with r1 and r2 nonzero
// ±1 entries in dimension n, as a float.
//
// # Safety
// `out_probability` must be a valid pointer.
enum ProbriStatus probri_p_ortho(uint64_t r1, uint64_t r2, uint64_t n, double *out_probability);

// Exact orthogonality probability as decimal numerator and denominator
// strings.
//
// # Safety
// `out_numerator` and `out_denominator` must be valid pointers.
enum ProbriStatus probri_p_ortho_exact(uint64_t r1,
                                       uint64_t r2,
                                       uint64_t n,
                                       char **out_numerator,
                                       char **out_denominator);

// Orthogonality probability when all nonzero entries are +1 (K = 1).
//
// # Safety
// `out_probability` must be a valid pointer.
enum ProbriStatus probri_p_ortho_k1(uint64_t r, uint64_t n, double *out_probability);

// Expected orthogonality probability under a distribution on r.
//
// The distribution is given as parallel arrays: `support[i]` with weight
// `weight_num[i] / weight_den[i]`; the weights must sum to 1.
//
// # Safety
// The three arrays must hold `len` readable elements and
// `out_probability` must be a valid pointer.
enum ProbriStatus probri_expected_p_ortho(const uint32_t *support,
                                          const uint64_t *weight_num,
                                          const uint64_t *weight_den,
                                          uintptr_t len,
                                          uint64_t n,
                                          double *out_probability);

// Smallest dimension n <= n_max with p_ortho(r, r, n) >= p_min.
//
// `p_min` is a decimal string such as "0.95" so the target stays exact.
// Writes the dimension and the capacity at that dimension; returns
// NOT_FOUND when no dimension within the bound reaches the target.
//
// # Safety
// `p_min`, `out_n`, and `out_capacity` must be valid pointers.
enum ProbriStatus probri_cutoff_n(uint64_t r,
                                  const char *p_min,
                                  uint64_t n_max,
                                  uint64_t *out_n,
                                  char **out_capacity);

// Load a persisted semantic space. The handle must be released with
// [`probri_space_free`].
//
// # Safety
// `path` and `out_space` must be valid pointers.
enum ProbriStatus probri_space_load(const char *path, struct ProbriSpace **out_space);

// Release a space handle. NULL is a no-op.
//
// # Safety
// `space` must have come from [`probri_space_load`] and not be freed yet.
void probri_space_free(struct ProbriSpace *space);

// Vocabulary size of a loaded space.
//
// # Safety
// `space` must be a live handle; `out_count` must be a valid pointer.
enum ProbriStatus probri_space_word_count(const struct ProbriSpace *space, uint64_t *out_count);

// Context-vector dimension of a loaded space.
//
// # Safety
// `space` must be a live handle; `out_dim` must be a valid pointer.
enum ProbriStatus probri_space_dim(const struct ProbriSpace *space, uint64_t *out_dim);

// Angle in radians between the semantic vectors of two words.
//
// # Safety
// `space` must be a live handle; `word`, `query`, and `out_angle` must be
// valid pointers.
enum ProbriStatus probri_space_angle(const struct ProbriSpace *space,
                                     const char *word,
                                     const char *query,
                                     double *out_angle);

// Run the two-slice suggestion algorithm and return the rows as a JSON
// array (objects with word, score, delta, rank_pre, rank_post, freq_pre,
// freq_post, theta_pre, theta_post).
//
// # Safety
// `pre` and `post` must be live handles; `query` and `out_json` must be
// valid pointers.
enum ProbriStatus probri_suggest_json(const struct ProbriSpace *pre,
                                      const struct ProbriSpace *post,
                                      const char *query,
                                      uint64_t kappa,
                                      uint64_t top,
                                      bool invert_freq_ratio,
                                      char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PROBRI_H */
