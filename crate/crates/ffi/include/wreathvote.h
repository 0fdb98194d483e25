#ifndef WREATHVOTE_H
#define WREATHVOTE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. Zero is success.
 */
typedef enum WvStatus {
  WV_STATUS_OK = 0,
  WV_STATUS_NULL_POINTER = 1,
  WV_STATUS_INVALID_UTF8 = 2,
  /*
   Malformed or inconsistent input.
   */
  WV_STATUS_INVALID_INPUT = 3,
  /*
   The request exceeds a size cap.
   */
  WV_STATUS_SIZE_GUARD = 4,
  /*
   A paradox instance has no solution.
   */
  WV_STATUS_INFEASIBLE = 5,
  WV_STATUS_OUT_OF_RANGE = 6,
  /*
   A bug in the library; the message has details.
   */
  WV_STATUS_INTERNAL = 7,
} WvStatus;

/*
 Opaque decomposition of a vector into its components `k = 0..=n`.
 */
typedef struct WvDecomposition WvDecomposition;

/*
 Opaque vector of exact rationals.
 */
typedef struct WvVector WvVector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. The pointer is
 valid until the next call into the library on the same thread.
 */
const char *wv_last_error(void);

/*
 Releases a string returned by this library.

 # Safety
 `s` must be null or a string from this library not yet freed.
 */
void wv_string_free(char *s);

/*
 Parses comma-separated rationals such as `"1,-1/2,3"`.

 # Safety
 `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum WvStatus wv_vector_parse(const char *text, struct WvVector **out);

/*
 # Safety
 `v` must be null or a live vector handle.
 */
size_t wv_vector_len(const struct WvVector *v);

/*
 Entry `i` as a newly allocated `"p/q"` string.

 # Safety
 `v` must be a live vector handle and `out` a valid pointer.
 */
enum WvStatus wv_vector_get(const struct WvVector *v, size_t i, char **out);

/*
 The whole vector as a comma-separated string.

 # Safety
 `v` must be a live vector handle and `out` a valid pointer.
 */
enum WvStatus wv_vector_to_string(const struct WvVector *v, char **out);

/*
 # Safety
 `v` must be null or a vector handle not yet freed.
 */
void wv_vector_free(struct WvVector *v);

/*
 The component-`k` distance profile `[p_0, ..., p_n]`.

 # Safety
 `out` must be a valid pointer.
 */
enum WvStatus wv_distance_profile(size_t m, size_t n, size_t k, struct WvVector **out);

/*
 Splits `v` (length `m^n`) into its components.

 # Safety
 `v` must be a live vector handle and `out` a valid pointer.
 */
enum WvStatus wv_decompose(size_t m,
                           size_t n,
                           const struct WvVector *v,
                           struct WvDecomposition **out);

/*
 Number of components, `n + 1`.

 # Safety
 `d` must be null or a live decomposition handle.
 */
size_t wv_decomposition_len(const struct WvDecomposition *d);

/*
 Copy of component `k`.

 # Safety
 `d` must be a live decomposition handle and `out` a valid pointer.
 */
enum WvStatus wv_decomposition_component(const struct WvDecomposition *d,
                                         size_t k,
                                         struct WvVector **out);

/*
 # Safety
 `d` must be null or a decomposition handle not yet freed.
 */
void wv_decomposition_free(struct WvDecomposition *d);

/*
 Schur parameters `lambda[0..=n]` of the distance weights `a` (length `n + 1`).

 # Safety
 `a` must be a live vector handle and `out` a valid pointer.
 */
enum WvStatus wv_schur_parameters(size_t m,
                                  size_t n,
                                  const struct WvVector *a,
                                  struct WvVector **out);

/*
 Scores of a committee-ballot profile (length `m^n`) under distance weights `a`.

 # Safety
 `a` and `profile` must be live vector handles and `out` a valid pointer.
 */
enum WvStatus wv_tally_ballots(size_t m,
                               size_t n,
                               const struct WvVector *a,
                               const struct WvVector *profile,
                               struct WvVector **out);

/*
 Number of orbits of rankings, as a decimal string.

 # Safety
 `out` must be a valid pointer.
 */
enum WvStatus wv_orbit_count(size_t m, size_t n, char **out);

/*
 Number of free weights of a general ranking rule, as a decimal string.

 # Safety
 `out` must be a valid pointer.
 */
enum WvStatus wv_parameter_count(size_t m, size_t n, char **out);

/*
 Solves a paradox instance given as JSON
 `{"weights": [...], "targets": [...], "orbit": key}` and writes the
 solution as JSON `{"profile", "solution_space_dim", "verified"}`.

 # Safety
 `instance_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum WvStatus wv_paradox(size_t m, size_t n, const char *instance_json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WREATHVOTE_H */
