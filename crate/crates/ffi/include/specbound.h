#ifndef SPECBOUND_H
#define SPECBOUND_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of an inequality check.
 */
typedef enum SbCheckStatus {
  SB_CHECK_STATUS_SATISFIED = 0,
  SB_CHECK_STATUS_VIOLATED = 1,
  SB_CHECK_STATUS_NOT_APPLICABLE = 2,
  SB_CHECK_STATUS_FAILED = 3,
} SbCheckStatus;

/**
 * Result code of every fallible call.
 */
typedef enum SbStatus {
  SB_STATUS_OK = 0,
  SB_STATUS_NULL_POINTER = 1,
  SB_STATUS_INVALID_UTF8 = 2,
  SB_STATUS_DOMAIN = 3,
  SB_STATUS_NUMERIC = 4,
  SB_STATUS_INVALID_MODEL = 5,
  SB_STATUS_INVALID_PROFILE = 6,
  SB_STATUS_RANGE = 7,
  SB_STATUS_SEARCH = 8,
  SB_STATUS_PRECONDITION = 9,
  SB_STATUS_CONFIG = 10,
  SB_STATUS_IO = 11,
  SB_STATUS_PANIC = 12,
} SbStatus;

/**
 * Cached evaluator of the associated isoperimetric function and its inverse.
 */
typedef struct SbAif SbAif;

/**
 * A rotationally symmetric model manifold.
 */
typedef struct SbModel SbModel;

/**
 * An isoperimetric function.
 */
typedef struct SbProfile SbProfile;

/**
 * Numeric summary of a verification report.
 */
typedef struct SbCheckResult {
  double lhs;
  double rhs;
  double slack;
  enum SbCheckStatus status;
} SbCheckResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or NULL if none. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *sb_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sb_version(void);

/**
 * Euclidean space of dimension `n`.
 *
 * # Safety
 * `out_model` must be a valid pointer to writable storage.
 */
enum SbStatus sb_model_euclidean(uint32_t n, struct SbModel **out_model);

/**
 * Hyperbolic space of dimension `n` and curvature `-kappa`.
 *
 * # Safety
 * `out_model` must be a valid pointer to writable storage.
 */
enum SbStatus sb_model_hyperbolic(uint32_t n, double kappa, struct SbModel **out_model);

/**
 * Releases a model. NULL is ignored.
 *
 * # Safety
 * `model` must be NULL or a handle from an `sb_model_*` constructor not yet freed.
 */
void sb_model_free(struct SbModel *model);

/**
 * Volume of the geodesic ball of radius `radius`.
 *
 * # Safety
 * `model` must be a live model handle and `out_volume` a valid pointer.
 */
enum SbStatus sb_ball_volume(const struct SbModel *model, double radius, double *out_volume);

/**
 * Principal Dirichlet eigenvalue of the geodesic ball of radius `radius`.
 *
 * # Safety
 * `model` must be a live model handle and `out_lambda` a valid pointer.
 */
enum SbStatus sb_principal_eigenvalue(const struct SbModel *model,
                                      double radius,
                                      double tol,
                                      double *out_lambda);

/**
 * Power-law profile `H(s) = d·s^{1-1/n}`.
 *
 * # Safety
 * `out_profile` must be a valid pointer to writable storage.
 */
enum SbStatus sb_profile_power_law(double d, uint32_t n, struct SbProfile **out_profile);

/**
 * Ball profile of a model: boundary area of the ball with the given volume.
 *
 * # Safety
 * `model` must be a live model handle and `out_profile` a valid pointer.
 */
enum SbStatus sb_profile_model(const struct SbModel *model, struct SbProfile **out_profile);

/**
 * Tabulated profile read from a two-column CSV file with header `s,H`.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out_profile` a valid pointer.
 */
enum SbStatus sb_profile_tabulated_csv(const char *path, struct SbProfile **out_profile);

/**
 * Tabulated profile from `len` sample pairs `(volumes[i], values[i])`.
 *
 * # Safety
 * `volumes` and `values` must each point to `len` readable doubles; `out_profile` must be
 * a valid pointer.
 */
enum SbStatus sb_profile_tabulated(const double *volumes,
                                   const double *values,
                                   size_t len,
                                   struct SbProfile **out_profile);

/**
 * Releases a profile. NULL is ignored.
 *
 * # Safety
 * `profile` must be NULL or a handle from an `sb_profile_*` constructor not yet freed.
 */
void sb_profile_free(struct SbProfile *profile);

/**
 * Evaluator of `H_a(t) = ∫₀ᵗ s/H(s)² ds` for a profile. The profile handle may be freed
 * afterwards.
 *
 * # Safety
 * `profile` must be a live profile handle and `out_aif` a valid pointer.
 */
enum SbStatus sb_aif_new(const struct SbProfile *profile, struct SbAif **out_aif);

/**
 * Releases an evaluator. NULL is ignored.
 *
 * # Safety
 * `aif` must be NULL or a handle from `sb_aif_new` not yet freed.
 */
void sb_aif_free(struct SbAif *aif);

/**
 * `H_a(t)`.
 *
 * # Safety
 * `aif` must be a live evaluator handle and `out_value` a valid pointer.
 */
enum SbStatus sb_aif_eval(const struct SbAif *aif, double t, double *out_value);

/**
 * `H_a⁻¹(y)`.
 *
 * # Safety
 * `aif` must be a live evaluator handle and `out_value` a valid pointer.
 */
enum SbStatus sb_aif_inverse(const struct SbAif *aif, double y, double *out_value);

/**
 * `C(λ, p, H) = 2·(H_a⁻¹(1/(2λ)))^{-1/p}`.
 *
 * # Safety
 * `aif` must be a live evaluator handle and `out_constant` a valid pointer.
 */
enum SbStatus sb_eigen_bound_constant(double lambda,
                                      double p,
                                      const struct SbAif *aif,
                                      double *out_constant);

/**
 * Closed-form constant `2(nλ)^{n/(2p)}/D^{n/p}` for a power-law profile.
 *
 * # Safety
 * `out_constant` must be a valid pointer.
 */
enum SbStatus sb_hadamard_constant(double lambda,
                                   double p,
                                   uint32_t n,
                                   double d,
                                   double *out_constant);

/**
 * Torsion bound `sup u ≤ H_a(|B_R|)` on one ball.
 *
 * # Safety
 * `model` and `profile` must be live handles and `out_result` a valid pointer.
 */
enum SbStatus sb_torsion_bound_check(const struct SbModel *model,
                                     double radius,
                                     const struct SbProfile *profile,
                                     struct SbCheckResult *out_result);

/**
 * Runs a configuration file, writing reports into `out_dir` (NULL selects the config's
 * own choice) on `jobs` threads (0 selects the default). `out_exit_code` receives the
 * batch exit code: 0 all satisfied, 1 violation, 2 configuration error, 3 numeric failure.
 *
 * # Safety
 * `config_path` must be a NUL-terminated string, `out_dir` NULL or a NUL-terminated
 * string, and `out_exit_code` a valid pointer.
 */
enum SbStatus sb_run_config(const char *config_path,
                            const char *out_dir,
                            size_t jobs,
                            int32_t *out_exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECBOUND_H */
