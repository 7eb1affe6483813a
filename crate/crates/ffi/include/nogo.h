#ifndef NOGO_H
#define NOGO_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  NOGO_STATUS_OK = 0,
  NOGO_STATUS_NULL_POINTER = 1,
  NOGO_STATUS_INVALID_UTF8 = 2,
  NOGO_STATUS_PARSE_ERROR = 3,
  NOGO_STATUS_ENGINE_ERROR = 4,
  NOGO_STATUS_PANIC = 5,
} NogoStatus;

/**
 * An element of the Weyl algebra in normal form.
 */
typedef struct NogoOperator NogoOperator;

/**
 * A parsed tensor expression.
 */
typedef struct NogoTensor NogoTensor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until
 * the next call from the same thread.
 */
const char *nogo_last_error(void);

/**
 * Engine version as a static string.
 */
const char *nogo_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void nogo_string_free(char *s);

/**
 * Parses a tensor source (`antisym F {1 2}; D[eta,^a] F_{ab}`).
 *
 * # Safety
 * `src` must be a valid C string and `out` a valid pointer.
 */
NogoStatus nogo_tensor_parse(const char *src, NogoTensor **out);

/**
 * # Safety
 * `t` must be NULL or a handle from this library, not yet freed.
 */
void nogo_tensor_free(NogoTensor *t);

/**
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
NogoStatus nogo_tensor_to_string(const NogoTensor *t, char **out);

/**
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
NogoStatus nogo_tensor_canonicalize(const NogoTensor *t, NogoTensor **out);

/**
 * Curved image of a flat expression, canonicalized.
 *
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
NogoStatus nogo_tensor_generalize(const NogoTensor *t, NogoTensor **out);

/**
 * Canonical equality.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` a valid pointer.
 */
NogoStatus nogo_tensor_equal(const NogoTensor *a, const NogoTensor *b, bool *out);

/**
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
NogoStatus nogo_tensor_is_zero(const NogoTensor *t, bool *out);

/**
 * Compares the curved images of two flat sources. `b` is parsed with the
 * declarations of `a`.
 *
 * # Safety
 * Strings must be valid C strings; `flat_equal` and `residual` valid pointers.
 */
NogoStatus nogo_wellposed(const char *a, const char *b, bool *flat_equal, NogoTensor **residual);

/**
 * Parses an operator expression (`qh^2*ph + i*qh`).
 *
 * # Safety
 * `src` must be a valid C string and `out` a valid pointer.
 */
NogoStatus nogo_operator_parse(const char *src, NogoOperator **out);

/**
 * # Safety
 * `op` must be NULL or a handle from this library, not yet freed.
 */
void nogo_operator_free(NogoOperator *op);

/**
 * `[a, b]` in normal form.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` a valid pointer.
 */
NogoStatus nogo_operator_commutator(const NogoOperator *a,
                                    const NogoOperator *b,
                                    NogoOperator **out);

/**
 * # Safety
 * `op` must be a live handle and `out` a valid pointer.
 */
NogoStatus nogo_operator_to_string(const NogoOperator *op, char **out);

/**
 * The constant `c` with quantum residual `c·Î` in the degree-three
 * quantization witness, as text.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
NogoStatus nogo_gvh_constant(char **out);

/**
 * Runs the command-line front end. `argv` excludes the program name.
 * Standard output goes to `out`; `exit_code` receives the exit status.
 *
 * # Safety
 * `argv` must point to `argc` valid C strings; `out` and `exit_code` must
 * be valid pointers.
 */
NogoStatus nogo_run(const char *const *argv, size_t argc, char **out, int32_t *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NOGO_H */
