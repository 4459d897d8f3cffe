#ifndef TORUS_RENORM_H
#define TORUS_RENORM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TrStatus {
  TR_STATUS_OK = 0,
  TR_STATUS_NULL_POINTER = 1,
  TR_STATUS_INVALID_UTF8 = 2,
  TR_STATUS_INVALID_ARGUMENT = 3,
  TR_STATUS_CONFIG_INVALID = 4,
  TR_STATUS_NUMBER_THEORY = 5,
  TR_STATUS_FIELD = 6,
  TR_STATUS_RENORMALIZATION = 7,
  TR_STATUS_IO = 8,
  TR_STATUS_OUT_OF_RANGE = 9,
  TR_STATUS_PANIC = 10,
} TrStatus;

// Continued-fraction expansion of a slope.
typedef struct TrCfExpansion TrCfExpansion;

// Renormalisation orbit with its per-step norms.
typedef struct TrOrbit TrOrbit;

// Norms of the deviation `X_n − ω_n` at one step.
typedef struct TrStepNorms {
  size_t n;
  double alpha;
  double total;
  double oscillatory;
  double const_omega;
  double const_orthogonal;
  // Signed coefficient along the expanding direction `(1, −1/α)`.
  double orthogonal_coefficient;
} TrStepNorms;

// The linearised step on constant fields.
typedef struct TrConstantBlock {
  // Row-major 2×2 matrix.
  double matrix[4];
  double nu;
  double kernel[2];
  double unstable[2];
} TrConstantBlock;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a success.
// The pointer stays valid until the next call on the same thread.
const char *tr_last_error(void);

// Expands `slope` (e.g. `"golden"`, `"7/5"`, or a decimal such as `"0.71828@256"`) to `terms` coefficients.
//
// # Safety
// `slope` must be a nul-terminated string and `result` a valid pointer.
enum TrStatus tr_cf_expand(const char *slope,
                           size_t terms,
                           struct TrCfExpansion **result);

// Number of certified coefficients; 0 for a null handle.
//
// # Safety
// `cf` must be null or a handle from [`tr_cf_expand`].
size_t tr_cf_len(const struct TrCfExpansion *cf);

// Partial quotient `a_n`.
//
// # Safety
// `cf` must be a handle from [`tr_cf_expand`] and `value` a valid pointer.
enum TrStatus tr_cf_coefficient(const struct TrCfExpansion *cf, size_t n, uint64_t *value);

// Tail `α_n` rounded to double precision.
//
// # Safety
// `cf` must be a handle from [`tr_cf_expand`] and `value` a valid pointer.
enum TrStatus tr_cf_tail(const struct TrCfExpansion *cf, size_t n, double *value);

// # Safety
// `cf` must be null or a handle from [`tr_cf_expand`] not freed before.
void tr_cf_free(struct TrCfExpansion *cf);

// Runs an orbit from `key = value` configuration text (any `scenario` key is ignored).
//
// An orbit that stops early is still returned; see [`tr_orbit_failure`].
//
// # Safety
// `config` must be a nul-terminated string and `result` a valid pointer.
enum TrStatus tr_orbit_run(const char *config, struct TrOrbit **result);

// Number of stored states, including the initial one; 0 for a null handle.
//
// # Safety
// `orbit` must be null or a handle from [`tr_orbit_run`].
size_t tr_orbit_len(const struct TrOrbit *orbit);

// Starting slope after the transient adjustment.
//
// # Safety
// `orbit` must be a handle from [`tr_orbit_run`] and `value` a valid pointer.
enum TrStatus tr_orbit_alpha0(const struct TrOrbit *orbit, double *value);

// # Safety
// `orbit` must be a handle from [`tr_orbit_run`] and `norms` a valid pointer.
enum TrStatus tr_orbit_norms(const struct TrOrbit *orbit, size_t n, struct TrStepNorms *norms);

// Fitted decay rate `θ̂`; writes NaN when too few states were produced.
//
// # Safety
// `orbit` must be a handle from [`tr_orbit_run`]; `theta` and `consistent` valid pointers.
enum TrStatus tr_orbit_decay(const struct TrOrbit *orbit, double *theta, bool *consistent);

// Why the orbit stopped early: [`TrStatus::Ok`] if it ran to completion, otherwise
// [`TrStatus::Renormalization`] with the reason in [`tr_last_error`].
//
// # Safety
// `orbit` must be a handle from [`tr_orbit_run`].
enum TrStatus tr_orbit_failure(const struct TrOrbit *orbit);

// # Safety
// `orbit` must be null or a handle from [`tr_orbit_run`] not freed before.
void tr_orbit_free(struct TrOrbit *orbit);

// Constant block of the linearised step at tail `alpha > 1`.
//
// # Safety
// `block` must be a valid pointer.
enum TrStatus tr_constant_block(double alpha, struct TrConstantBlock *block);

// Runs the scenario described by `config` and writes its CSV tables and JSON
// manifest into `out_dir`. `passed` receives whether every certificate passed.
//
// # Safety
// `config` and `out_dir` must be nul-terminated strings and `passed` a valid pointer.
enum TrStatus tr_run_scenario(const char *config, const char *out_dir, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORUS_RENORM_H */
