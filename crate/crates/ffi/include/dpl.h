#ifndef DPL_H
#define DPL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DplField {
  DPL_FIELD_TEMPERATURE = 0,
  DPL_FIELD_FLUX = 1,
  DPL_FIELD_FLUX_RATE = 2,
} DplField;

typedef enum DplRegime {
  DPL_REGIME_STABLE = 0,
  DPL_REGIME_GROWTH = 1,
  DPL_REGIME_DEGENERATE_ZERO_TAU_T = 2,
} DplRegime;

typedef enum DplStatus {
  DPL_STATUS_OK = 0,
  DPL_STATUS_NULL_POINTER = 1,
  DPL_STATUS_INVALID_INPUT = 2,
  DPL_STATUS_CONFIG = 3,
  DPL_STATUS_REGIME = 4,
  DPL_STATUS_DIVERGENCE = 5,
  DPL_STATUS_DOMAIN = 6,
  DPL_STATUS_SOLVER = 7,
  DPL_STATUS_BUFFER_TOO_SMALL = 8,
  DPL_STATUS_UNSUPPORTED = 9,
  DPL_STATUS_PANIC = 10,
  DPL_STATUS_OTHER = 11,
} DplStatus;

/**
 * Solved harmonic amplitude on a uniform strip.
 */
typedef struct DplSteady DplSteady;

/**
 * A transient rod problem with its marching state.
 */
typedef struct DplTransient DplTransient;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into this library on the same thread.
 */
const char *dpl_last_error_message(void);

/**
 * Delay regime of `(tau_q, tau_T)`.
 *
 * # Safety
 * `out_regime` must be valid for writes.
 */
enum DplStatus dpl_classify_regime(double tau_q, double tau_t, enum DplRegime *out_regime);

/**
 * Characteristic speed and the regime's front-speed bound for uniform `a`, `k`.
 *
 * # Safety
 * `out_c_char` and `out_c_bound` must be valid for writes.
 */
enum DplStatus dpl_speeds(double tau_q,
                          double tau_t,
                          double a,
                          double k,
                          double *out_c_char,
                          double *out_c_bound);

/**
 * Critical frequency of a strip of width `width`; `+inf` when `tau_q = 0`.
 *
 * # Safety
 * `out_omega_c` must be valid for writes.
 */
enum DplStatus dpl_critical_frequency(double width,
                                      double tau_q,
                                      double tau_t,
                                      double a,
                                      double k,
                                      double *out_omega_c);

/**
 * Decay length `nu` of the steady amplitude below the critical frequency.
 *
 * # Safety
 * `out_nu` must be valid for writes.
 */
enum DplStatus dpl_decay_rate(double width,
                              double tau_q,
                              double tau_t,
                              double a,
                              double k,
                              double omega,
                              double *out_nu);

/**
 * Build a transient run from experiment config text (same format as the
 * `dpl` CLI). The run starts at `t = 0`.
 *
 * # Safety
 * `config` must be a NUL-terminated string; `out_handle` valid for writes.
 */
enum DplStatus dpl_transient_new(const char *config, struct DplTransient **out_handle);

/**
 * Step until `t >= t_target` or the configured end time. Writes the time reached.
 *
 * # Safety
 * `h` must be a live handle; `out_t` valid for writes or NULL.
 */
enum DplStatus dpl_transient_advance(struct DplTransient *h, double t_target, double *out_t);

/**
 * Number of grid nodes.
 *
 * # Safety
 * `h` must be a live handle; `out_n` valid for writes.
 */
enum DplStatus dpl_transient_node_count(struct DplTransient *h, size_t *out_n);

/**
 * Copy one nodal field into `buf` of length `len` (at least the node count).
 *
 * # Safety
 * `h` must be a live handle; `buf` valid for `len` writes.
 */
enum DplStatus dpl_transient_copy_field(struct DplTransient *h,
                                        enum DplField field,
                                        double *buf,
                                        size_t len);

/**
 * # Safety
 * `h` must be NULL or a handle from [`dpl_transient_new`] not yet freed.
 */
void dpl_transient_free(struct DplTransient *h);

/**
 * Solve the amplitude problem on a `nx1 × nx3` strip with base profile
 * `amp sin(pi x1 / width)` at `x3 = 0`.
 *
 * # Safety
 * `out_handle` must be valid for writes.
 */
enum DplStatus dpl_steady_solve(double width,
                                double length,
                                size_t nx1,
                                size_t nx3,
                                double a,
                                double k,
                                double tau_q,
                                double tau_t,
                                double omega,
                                double amp,
                                struct DplSteady **out_handle);

/**
 * Copy `M(x3)` at the `nx3` cross-sections into `buf`.
 *
 * # Safety
 * `h` must be a live handle; `buf` valid for `len` writes.
 */
enum DplStatus dpl_steady_decay_measure(struct DplSteady *h, double *buf, size_t len);

/**
 * Copy the amplitude, `x1` fastest, as separate real and imaginary parts.
 *
 * # Safety
 * `h` must be a live handle; `re` and `im` valid for `len` writes each.
 */
enum DplStatus dpl_steady_copy_amplitude(struct DplSteady *h, double *re, double *im, size_t len);

/**
 * Check the decay estimate with relative slack `tol`. Fails with
 * `Domain` at or above the critical frequency.
 *
 * # Safety
 * `h` must be a live handle; outputs valid for writes.
 */
enum DplStatus dpl_steady_certify(struct DplSteady *h,
                                  double tol,
                                  bool *out_certified,
                                  double *out_min_margin);

/**
 * # Safety
 * `h` must be NULL or a handle from [`dpl_steady_solve`] not yet freed.
 */
void dpl_steady_free(struct DplSteady *h);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DPL_H */
