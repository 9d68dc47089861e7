#ifndef LINKFORM_H
#define LINKFORM_H

/* Generated by cbindgen from the linkform-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum LfStatus {
  /**
   * Success.
   */
  LF_STATUS_OK = 0,
  /**
   * Malformed input text (bad JSON, bad UTF-8).
   */
  LF_STATUS_PARSE = 1,
  /**
   * Well-formed input with invalid content (bad rational, shape
   * mismatch, unknown element, non-isotropic triple).
   */
  LF_STATUS_VALIDATION = 2,
  /**
   * Input is meaningful but outside the supported exact-checking or
   * enumeration bounds.
   */
  LF_STATUS_SCOPE = 3,
  /**
   * A required pointer argument was null.
   */
  LF_STATUS_NULL_ARGUMENT = 4,
  /**
   * A panic was caught at the boundary; see [`lf_last_error`].
   */
  LF_STATUS_PANIC = 5,
} LfStatus;

/**
 * An opaque parsed manifold model.
 */
typedef struct LfModel LfModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the current thread's most recent failed `lf_` call, or null
 * if none has failed yet.
 *
 * # Safety
 *
 * The pointer is borrowed from thread-local storage: it stays valid until
 * the next failing `lf_` call on the same thread and must not be freed.
 */
const char *lf_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 *
 * `s` must be a pointer previously returned through a `char**`
 * out-parameter of this library (or null, which is a no-op), and must not
 * be used afterwards.
 */
void lf_string_free(char *s);

/**
 * Parses a model file (UTF-8 JSON text) into a handle.
 *
 * # Safety
 *
 * `json` must be a valid nul-terminated C string and `out` a valid
 * pointer. On success `*out` owns the model and must be released with
 * [`lf_model_free`].
 */
enum LfStatus lf_model_parse(const char *json, struct LfModel **out);

/**
 * Releases a model handle (null is a no-op).
 *
 * # Safety
 *
 * `model` must have come from [`lf_model_parse`] and must not be used
 * afterwards.
 */
void lf_model_free(struct LfModel *model);

/**
 * The model's name.
 *
 * # Safety
 *
 * `model` must be a live handle and `out` a valid pointer; the returned
 * string is released with [`lf_string_free`].
 */
enum LfStatus lf_model_name(const struct LfModel *model, char **out);

/**
 * Number of invariant-factor generators of the first homology group.
 *
 * # Safety
 *
 * `model` must be a live handle and `out` a valid pointer.
 */
enum LfStatus lf_model_rank(const struct LfModel *model, size_t *out);

/**
 * The group order, as a decimal string.
 *
 * # Safety
 *
 * `model` must be a live handle and `out` a valid pointer; the returned
 * string is released with [`lf_string_free`].
 */
enum LfStatus lf_model_group_order(const struct LfModel *model, char **out);

/**
 * Looks up a named element and writes its reduced coordinates.
 *
 * `coords` must have space for exactly the group's rank (see
 * [`lf_model_rank`]).
 *
 * # Safety
 *
 * `model` must be a live handle, `name` a valid C string, and `coords` a
 * writable array of length `len`.
 */
enum LfStatus lf_model_element(const struct LfModel *model,
                               const char *name,
                               int64_t *coords,
                               size_t len);

/**
 * Evaluates the linking form on two classes given by coordinates; the
 * result is a canonical rational string `"a/b"`.
 *
 * # Safety
 *
 * `model` must be a live handle, `x` and `y` readable arrays of length
 * `len`, and `out` a valid pointer; the returned string is released with
 * [`lf_string_free`].
 */
enum LfStatus lf_lambda2_eval(const struct LfModel *model,
                              const int64_t *x,
                              const int64_t *y,
                              size_t len,
                              char **out);

/**
 * Evaluates the triple form on three classes given by coordinates; the
 * result is a canonical rational string `"a/b"`. Fails with
 * `LF_STATUS_VALIDATION` if the model has no `lambda3` data or the
 * classes are not pairwise unlinked.
 *
 * # Safety
 *
 * `model` must be a live handle, `x`, `y`, `z` readable arrays of length
 * `len`, and `out` a valid pointer; the returned string is released with
 * [`lf_string_free`].
 */
enum LfStatus lf_lambda3_eval(const struct LfModel *model,
                              const int64_t *x,
                              const int64_t *y,
                              const int64_t *z,
                              size_t len,
                              char **out);

/**
 * Number of Lagrangians of the model's linking form.
 *
 * # Safety
 *
 * `model` must be a live handle and `out` a valid pointer.
 */
enum LfStatus lf_lagrangian_count(const struct LfModel *model, size_t *out);

/**
 * Runs the rational-homology-ball obstruction and returns the summary
 * token: `"SomeLagrangianVanishes"`, `"NoLagrangianVanishes"`, or
 * `"NoLagrangiansExist"`.
 *
 * # Safety
 *
 * `model` must be a live handle and `out` a valid pointer; the returned
 * string is released with [`lf_string_free`].
 */
enum LfStatus lf_obstruct_summary(const struct LfModel *model, char **out);

/**
 * Exhaustively sweeps the clasper family `fam(p, n)` and returns the
 * summary line `"total=... exceptions=..."`.
 *
 * `workers` is the number of threads (0 means 1). The sweep runs to
 * completion; for interruptible or checkpointed runs use the `linkform`
 * CLI, which layers those on the same engine.
 *
 * # Safety
 *
 * `out` must be a valid pointer; the returned string is released with
 * [`lf_string_free`].
 */
enum LfStatus lf_sweep_exhaustive(uint64_t p, size_t n, size_t workers, char **out);

/**
 * Draws `count` parameter vectors of `fam(p, n)` seeded by `seed` and
 * returns the summary line `"total=... exceptions=..."`.
 *
 * # Safety
 *
 * `out` must be a valid pointer; the returned string is released with
 * [`lf_string_free`].
 */
enum LfStatus lf_sweep_sample(uint64_t p, size_t n, uint64_t count, uint64_t seed, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LINKFORM_H */
