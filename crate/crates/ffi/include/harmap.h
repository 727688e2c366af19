#ifndef HARMAP_H
#define HARMAP_H

/* Generated by cbindgen from harmap-ffi; edit the Rust source instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define HARMAP_OK 0

#define HARMAP_ERR_SYNTAX 1

#define HARMAP_ERR_UNKNOWN_IDENT 2

#define HARMAP_ERR_NON_ANALYTIC 3

#define HARMAP_ERR_MATH_DOMAIN 4

#define HARMAP_ERR_OUTSIDE_DISK 5

#define HARMAP_ERR_RANGE 6

#define HARMAP_ERR_ORIENTATION 7

#define HARMAP_ERR_UNIMODULAR 8

#define HARMAP_ERR_CONTOUR 9

#define HARMAP_ERR_WINDING_SIGN 10

#define HARMAP_ERR_NONCONVERGENCE 11

#define HARMAP_ERR_SINGULAR 12

#define HARMAP_ERR_BUDGET 13

#define HARMAP_ERR_PROFILE 14

#define HARMAP_ERR_MISSING_PARAM 15

#define HARMAP_ERR_ANALYTIC_ONLY 16

#define HARMAP_ERR_BAD_GRID 17

#define HARMAP_ERR_NULL 100

#define HARMAP_ERR_UTF8 101

#define HARMAP_ERR_PANIC 102

/**
 * Channel selectors for `harmap_map_sup_norm`.
 */
#define HARMAP_CHANNEL_PRE_SCHWARZIAN 0

#define HARMAP_CHANNEL_SCHWARZIAN 1

#define HARMAP_CHANNEL_BECKER 2

#define HARMAP_CHANNEL_HYPERBOLIC 3

/**
 * Parsed analytic expression handle.
 */
typedef struct HarmapExpr HarmapExpr;

/**
 * Harmonic map handle (h plus conjugated g, g(0) = 0).
 */
typedef struct HarmapMap HarmapMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * ABI revision; bump on any incompatible change.
 */
uint32_t harmap_abi_version(void);

/**
 * Message for the last failure on this thread. Never NULL; empty before
 * any failure. The pointer is invalidated by the next failing call on the
 * same thread.
 */
const char *harmap_last_error(void);

/**
 * Parse an analytic expression in the variable z.
 *
 * # Safety
 * `src` must be a valid NUL-terminated string and `out` a valid pointer.
 */
int harmap_expr_parse(const char *src, struct HarmapExpr **out);

/**
 * Release an expression handle. NULL is a no-op.
 *
 * # Safety
 * `expr` must be NULL or a pointer from `harmap_expr_parse` not yet freed.
 */
void harmap_expr_free(struct HarmapExpr *expr);

/**
 * Evaluate an expression at z = re + i*im, |z| < 1.
 *
 * # Safety
 * Pointers must be valid; `expr` must come from `harmap_expr_parse`.
 */
int harmap_expr_eval(const struct HarmapExpr *expr,
                     double re,
                     double im,
                     double *out_re,
                     double *out_im);

/**
 * Value and first three derivatives at z. `out` receives 8 doubles:
 * f, f', f'', f''' as (re, im) pairs in that order.
 *
 * # Safety
 * `out` must point to at least 8 doubles.
 */
int harmap_expr_jet(const struct HarmapExpr *expr, double re, double im, double *out);

/**
 * Build a harmonic map f = h + conj(g) from two expression sources.
 * g is normalized to g(0) = 0; the map must be orientation preserving at
 * the origin.
 *
 * # Safety
 * Strings must be valid NUL-terminated; `out` must be a valid pointer.
 */
int harmap_map_new(const char *label, const char *h_src, const char *g_src, struct HarmapMap **out);

/**
 * Release a map handle. NULL is a no-op.
 *
 * # Safety
 * `map` must be NULL or a pointer from `harmap_map_new` not yet freed.
 */
void harmap_map_free(struct HarmapMap *map);

/**
 * f(z) and the Jacobian at z. `out` receives 3 doubles: value re, im,
 * Jacobian.
 *
 * # Safety
 * `out` must point to at least 3 doubles.
 */
int harmap_map_eval(const struct HarmapMap *map, double re, double im, double *out);

/**
 * Operator values at z. `out` receives 9 doubles: pre-Schwarzian (re, im),
 * Schwarzian (re, im), hyperbolic derivative (re, im), then the weighted
 * channels |P|(1-|z|^2), |S|(1-|z|^2)^2, and the Becker sum.
 *
 * # Safety
 * `out` must point to at least 9 doubles.
 */
int harmap_map_operators(const struct HarmapMap *map, double re, double im, double *out);

/**
 * Disk sup-norm of a weighted channel (HARMAP_CHANNEL_*). Zero
 * `ladder_depth` or `angular_base` picks the defaults (13 and 256).
 * An infinite result means the channel poisoned at a sampled point; that
 * is a value, not an error.
 *
 * # Safety
 * Output pointers must be valid or NULL (NULL outputs are skipped).
 */
int harmap_map_sup_norm(const struct HarmapMap *map,
                        int channel,
                        size_t ladder_depth,
                        size_t angular_base,
                        double *out_value,
                        int *out_converged);

/**
 * Winding number of f around w = w_re + i*w_im on the circle |z| = radius.
 *
 * # Safety
 * `out_count` must be a valid pointer.
 */
int harmap_map_winding(const struct HarmapMap *map,
                       double w_re,
                       double w_im,
                       double radius,
                       int64_t *out_count);

/**
 * Count Newton-certified preimages of w inside |z| < radius.
 *
 * # Safety
 * `out_count` must be a valid pointer.
 */
int harmap_map_preimage_count(const struct HarmapMap *map,
                              double w_re,
                              double w_im,
                              double radius,
                              int64_t *out_count);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HARMAP_H */
