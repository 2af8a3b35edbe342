#ifndef HOMOP_H
#define HOMOP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

#define HOMOP_REP_EST1 0

#define HOMOP_REP_STEPANOV 1

#define HOMOP_REP_RADON 2

#define HOMOP_BACKEND_SPECTRAL 0

#define HOMOP_BACKEND_QUADRATURE 1

typedef enum HomopStatus {
  HOMOP_STATUS_OK = 0,
  HOMOP_STATUS_NULL_POINTER = 1,
  HOMOP_STATUS_INVALID_UTF8 = 2,
  HOMOP_STATUS_PARAMETER = 3,
  HOMOP_STATUS_PARSE = 4,
  HOMOP_STATUS_ALIASING = 5,
  HOMOP_STATUS_PRECONDITION = 6,
  HOMOP_STATUS_DOMAIN = 7,
  HOMOP_STATUS_SINGULAR_KERNEL = 8,
  HOMOP_STATUS_DIVERGENT = 9,
  HOMOP_STATUS_PANIC = 10,
} HomopStatus;

/**
 * Quadrature settings.
 */
typedef struct HomopConfig HomopConfig;

/**
 * A function on the line.
 */
typedef struct HomopLineFn HomopLineFn;

/**
 * A 2π-periodic function.
 */
typedef struct HomopPeriodicFn HomopPeriodicFn;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *homop_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *homop_last_error_message(void);

/**
 * Static name of a status code, `"unknown"` for values outside the enum.
 */
const char *homop_status_name(uint32_t status);

/**
 * `1/(π(x₁y₂ − x₂y₁))`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum HomopStatus homop_kernel_eval(double x1, double x2, double y1, double y2, double *out);

/**
 * Riesz constant `C_p`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum HomopStatus homop_riesz_constant(double p, double *out);

/**
 * Default quadrature settings.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum HomopStatus homop_config_new(struct HomopConfig **out);

/**
 * Sets one of the keys `N`, `R`, `R_power`, `tail_policy`, `log_spacing`.
 * The configuration is left unchanged on error.
 *
 * # Safety
 * `cfg` must come from [`homop_config_new`]; `key` and `value` must be
 * NUL-terminated strings.
 */
enum HomopStatus homop_config_set(struct HomopConfig *cfg, const char *key, const char *value);

/**
 * # Safety
 * `cfg` must come from [`homop_config_new`] or be null.
 */
void homop_config_free(struct HomopConfig *cfg);

/**
 * Parses a line function such as `gaussian:0,1` or `power:0.5`.
 *
 * # Safety
 * `desc` must be a NUL-terminated string and `out` valid for a write.
 */
enum HomopStatus homop_line_fn_new(const char *desc, struct HomopLineFn **out);

/**
 * # Safety
 * `f` must come from [`homop_line_fn_new`] or be null.
 */
void homop_line_fn_free(struct HomopLineFn *f);

/**
 * Parses a periodic function such as `trigpoly:k=1:1` or `holder-cusp:0.5`.
 *
 * # Safety
 * `desc` must be a NUL-terminated string and `out` valid for a write.
 */
enum HomopStatus homop_periodic_fn_new(const char *desc, struct HomopPeriodicFn **out);

/**
 * # Safety
 * `f` must come from [`homop_periodic_fn_new`] or be null.
 */
void homop_periodic_fn_free(struct HomopPeriodicFn *f);

/**
 * Hilbert transform on the line at `x`. A null `cfg` uses the defaults.
 *
 * # Safety
 * `g` must be a live handle, `cfg` a live handle or null, `out` valid for a write.
 */
enum HomopStatus homop_hilbert_line(const struct HomopLineFn *g,
                                    double x,
                                    const struct HomopConfig *cfg,
                                    double *out);

/**
 * `𝒦₁φ` at `len` angles, real and imaginary parts written to `out_re` and
 * `out_im`. `n` is the quadrature grid size, `backend` one of the
 * `HOMOP_BACKEND_*` constants.
 *
 * # Safety
 * `phi` must be a live handle; `alphas`, `out_re`, `out_im` must each be
 * valid for `len` elements.
 */
enum HomopStatus homop_k1_apply(const struct HomopPeriodicFn *phi,
                                const double *alphas,
                                size_t len,
                                size_t n,
                                uint32_t backend,
                                double *out_re,
                                double *out_im);

/**
 * `K(f₁ ⊗ f₂)(x₁, x₂)` by the representation `rep`, one of the
 * `HOMOP_REP_*` constants. A null `cfg` uses the defaults.
 *
 * # Safety
 * `f1`, `f2` must be live handles, `cfg` a live handle or null, `out` valid
 * for a write.
 */
enum HomopStatus homop_k_apply(const struct HomopLineFn *f1,
                               const struct HomopLineFn *f2,
                               double x1,
                               double x2,
                               uint32_t rep,
                               const struct HomopConfig *cfg,
                               double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOMOP_H */
