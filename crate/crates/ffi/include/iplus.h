#ifndef IPLUS_H
#define IPLUS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum IplusStatus {
  IPLUS_STATUS_OK = 0,
  IPLUS_STATUS_NULL_POINTER = 1,
  IPLUS_STATUS_INVALID_UTF8 = 2,
  IPLUS_STATUS_PARSE_ERROR = 3,
  IPLUS_STATUS_INVALID_ARGUMENT = 4,
  IPLUS_STATUS_BUFFER_TOO_SMALL = 5,
  IPLUS_STATUS_PANIC = 6,
} IplusStatus;

typedef enum IplusMinModVerdict {
  IPLUS_MIN_MOD_VERDICT_DIVERGES = 0,
  IPLUS_MIN_MOD_VERDICT_NOT_DIVERGING = 1,
  IPLUS_MIN_MOD_VERDICT_UNDECIDED = 2,
} IplusMinModVerdict;

typedef enum IplusPointClass {
  IPLUS_POINT_CLASS_UNBOUNDED_SUSPECT = 0,
  IPLUS_POINT_CLASS_BOUNDED_SUSPECT = 1,
  IPLUS_POINT_CLASS_UNDECIDED = 2,
} IplusPointClass;

/**
 * Opaque parsed expression.
 */
typedef struct IplusFunction IplusFunction;

typedef struct IplusComplex {
  double re;
  double im;
} IplusComplex;

typedef struct IplusExtremum {
  double radius;
  double value;
  double arg_extremum;
  size_t samples_used;
  bool refined;
} IplusExtremum;

typedef struct IplusOrbitPolicy {
  size_t budget;
  double escape_radius;
  double cycle_tol;
  size_t cycle_window;
} IplusOrbitPolicy;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next `iplus_*` call on the same thread.
 */
const char *iplus_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *iplus_version(void);

/**
 * Parses `source` (NUL-terminated UTF-8) into a new handle stored in `*out`.
 */
enum IplusStatus iplus_function_parse(const char *source, struct IplusFunction **out);

/**
 * Releases a handle. NULL is ignored.
 */
void iplus_function_free(struct IplusFunction *f);

/**
 * Evaluates `f` at `z`. `overflowed` may be NULL.
 */
enum IplusStatus iplus_function_eval(const struct IplusFunction *f,
                                     struct IplusComplex z,
                                     struct IplusComplex *out,
                                     bool *overflowed);

/**
 * New handle for the symbolic derivative of `f`.
 */
enum IplusStatus iplus_function_derivative(const struct IplusFunction *f,
                                           struct IplusFunction **out);

/**
 * Writes the canonical form of `f` into `buf` (capacity `len` bytes,
 * NUL included). `*needed` receives the required capacity; pass
 * `buf = NULL, len = 0` to query it.
 */
enum IplusStatus iplus_function_print(const struct IplusFunction *f,
                                      char *buf,
                                      size_t len,
                                      size_t *needed);

/**
 * Minimum of `|f|` on `|z| = r`.
 */
enum IplusStatus iplus_min_modulus(const struct IplusFunction *f,
                                   double r,
                                   size_t n_coarse,
                                   double tol,
                                   struct IplusExtremum *out);

/**
 * Maximum of `|f|` on `|z| = r`.
 */
enum IplusStatus iplus_max_modulus(const struct IplusFunction *f,
                                   double r,
                                   size_t n_coarse,
                                   double tol,
                                   struct IplusExtremum *out);

/**
 * Iterates `r ↦ m(r)` from `r0`. The sequence (starting with `r0`) is
 * copied into `seq` up to `cap` values; `*len` receives its full length.
 * `seq` may be NULL when `cap` is 0.
 */
enum IplusStatus iplus_iterate_min_modulus(const struct IplusFunction *f,
                                           double r0,
                                           size_t n_max,
                                           double blow_up,
                                           enum IplusMinModVerdict *verdict,
                                           double *seq,
                                           size_t cap,
                                           size_t *len);

/**
 * Default orbit policy: budget 200, escape radius 1e6, cycle tolerance
 * 1e-9, cycle window 32.
 */
struct IplusOrbitPolicy iplus_orbit_policy_default(void);

/**
 * Classifies the orbit of `z`. `policy` may be NULL for the default.
 */
enum IplusStatus iplus_classify_point(const struct IplusFunction *f,
                                      struct IplusComplex z,
                                      const struct IplusOrbitPolicy *policy,
                                      enum IplusPointClass *out);

/**
 * Classifies an `nx × ny` pixel grid over `[x_min, x_max] × [y_min, y_max]`
 * into `out` (`nx * ny` bytes, row-major, row 0 at the top), each byte an
 * [`IplusPointClass`] value.
 */
enum IplusStatus iplus_classify_grid(const struct IplusFunction *f,
                                     double x_min,
                                     double x_max,
                                     double y_min,
                                     double y_max,
                                     size_t nx,
                                     size_t ny,
                                     const struct IplusOrbitPolicy *policy,
                                     uint8_t *out,
                                     size_t out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IPLUS_H */
