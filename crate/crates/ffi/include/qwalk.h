#ifndef QWALK_H
#define QWALK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QwChannelKind {
  QW_CHANNEL_KIND_NONE = 0,
  QW_CHANNEL_KIND_BIT_FLIP = 1,
  QW_CHANNEL_KIND_Y_FLIP = 2,
  QW_CHANNEL_KIND_Z_FLIP = 3,
  QW_CHANNEL_KIND_DEPOLARIZING = 4,
} QwChannelKind;

typedef enum QwStatus {
  QW_STATUS_OK = 0,
  QW_STATUS_NULL_POINTER = 1,
  QW_STATUS_INVALID_ARGUMENT = 2,
  QW_STATUS_NUMERICAL = 3,
  QW_STATUS_BUFFER_TOO_SMALL = 4,
  QW_STATUS_PANIC = 5,
} QwStatus;

/**
 * A density operator on the same lattice as the state it came from.
 */
typedef struct QwDensity QwDensity;

/**
 * A walk: variant plus coin profiles.
 */
typedef struct QwSpec QwSpec;

/**
 * A pure state on an open line sized for a fixed number of steps.
 */
typedef struct QwState QwState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Standard walk with one coin angle, uniform in space.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum QwStatus qw_spec_standard(double theta, struct QwSpec **out);

/**
 * Split-step walk. Equal `minus`/`plus` angles give a uniform coin.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum QwStatus qw_spec_split_step(double theta1,
                                 double theta2_minus,
                                 double theta2_plus,
                                 struct QwSpec **out);

/**
 * Double split-step walk; `angles` holds `(minus, plus)` for theta1..theta4.
 *
 * # Safety
 * `angles` must point to 8 readable doubles and `out` must be valid for writes.
 */
enum QwStatus qw_spec_double_split_step(const double *angles, struct QwSpec **out);

/**
 * # Safety
 * `spec` must come from a `qw_spec_*` constructor or be null.
 */
void qw_spec_free(struct QwSpec *spec);

/**
 * Bulk quasienergy gaps at 0 and pi (uniform walks only).
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_spec_gaps(const struct QwSpec *spec,
                           size_t k_samples,
                           double *gap0,
                           double *gap_pi);

/**
 * Runs the symmetry checks on a ring; `passed` is 1 when all hold.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_spec_validate(const struct QwSpec *spec,
                               size_t ring_sites,
                               double *chiral_residual,
                               int32_t *passed);

/**
 * `(alpha|0> + beta|1>) (x) |0>` on a line wide enough for `max_steps` steps.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_state_new(const struct QwSpec *spec,
                           size_t max_steps,
                           double alpha_re,
                           double alpha_im,
                           double beta_re,
                           double beta_im,
                           struct QwState **out);

/**
 * # Safety
 * `state` must come from [`qw_state_new`] or be null.
 */
void qw_state_free(struct QwState *state);

/**
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_state_step(struct QwState *state, const struct QwSpec *spec, size_t steps);

/**
 * Leftmost site and number of sites of the state's lattice.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_state_sites(const struct QwState *state, int64_t *x_min, size_t *sites);

/**
 * Writes `p(x)` for every site, leftmost first.
 *
 * # Safety
 * `buf` must have room for `len` doubles.
 */
enum QwStatus qw_state_distribution(const struct QwState *state, double *buf, size_t len);

/**
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_state_negativity(const struct QwState *state, double *out);

/**
 * Probability within `|x| <= window`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_state_localization(const struct QwState *state, uint64_t window, double *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_density_from_state(const struct QwState *state, struct QwDensity **out);

/**
 * # Safety
 * `rho` must come from [`qw_density_from_state`] or be null.
 */
void qw_density_free(struct QwDensity *rho);

/**
 * `steps` noisy steps with channel `kind` of strength `p` in `[0, 0.5]`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_density_step(struct QwDensity *rho,
                              const struct QwSpec *spec,
                              enum QwChannelKind kind,
                              double p,
                              size_t steps);

/**
 * # Safety
 * `buf` must have room for `len` doubles.
 */
enum QwStatus qw_density_distribution(const struct QwDensity *rho, double *buf, size_t len);

/**
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_density_negativity(const struct QwDensity *rho, double *out);

/**
 * Real part of the trace.
 *
 * # Safety
 * Pointers must be valid.
 */
enum QwStatus qw_density_trace(const struct QwDensity *rho, double *out);

/**
 * Copies the last error message of this thread, NUL terminated and
 * truncated to `len`. Returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must have room for `len` bytes, or be null to query the length.
 */
size_t qw_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qw_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QWALK_H */
