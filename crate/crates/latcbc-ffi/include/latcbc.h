#ifndef LATCBC_H
#define LATCBC_H

/* Generated by cbindgen from latcbc-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum LatcbcStatus {
  LATCBC_STATUS_OK = 0,
  /**
   * A pointer argument was null or a length was inconsistent.
   */
  LATCBC_STATUS_NULL_POINTER = 1,
  /**
   * Arguments were rejected (bad modulus, nonpositive weights, ...).
   */
  LATCBC_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A construction or evaluation failed numerically.
   */
  LATCBC_STATUS_NUMERICAL_FAILURE = 3,
} LatcbcStatus;

/**
 * An opaque construction result.
 */
typedef struct LatcbcResult LatcbcResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL
 * terminated, truncating) and returns the full message length in bytes.
 * `buf` may be null to query the length alone.
 */
size_t latcbc_last_error(char *buf, size_t capacity);

/**
 * Classic CBC with product weights `gamma[0..s]`. `b` (and optionally
 * `b_order`, the values `B_1..B_s`) may be supplied to certify the RMS
 * bound; both may be null.
 *
 * # Safety
 * `gamma` must point to `s` doubles; `b`/`b_order` must be null or point
 * to `s` doubles.
 */
enum LatcbcStatus latcbc_cbc_product(uint64_t n,
                                     size_t s,
                                     const double *gamma,
                                     const double *b,
                                     const double *b_order,
                                     struct LatcbcResult **out);

/**
 * Classic CBC with POD weights: product part `gamma[0..s]` and order
 * factors `gamma_order` holding the values `Gamma_1..Gamma_s`.
 *
 * # Safety
 * `gamma` and `gamma_order` must point to `s` doubles; `b`/`b_order` must
 * be null or point to `s` doubles.
 */
enum LatcbcStatus latcbc_cbc_pod(uint64_t n,
                                 size_t s,
                                 const double *gamma,
                                 const double *gamma_order,
                                 const double *b,
                                 const double *b_order,
                                 struct LatcbcResult **out);

/**
 * Double CBC with product-form bound data `b[0..s]`. Pass `gamma1 <= 0`
 * for the default first-dimension weight.
 *
 * # Safety
 * `b` must point to `s` doubles.
 */
enum LatcbcStatus latcbc_dcbc_product(uint64_t n,
                                      size_t s,
                                      const double *b,
                                      double gamma1,
                                      struct LatcbcResult **out);

/**
 * Double CBC with POD weights: bound data `(b, B)` and order weight
 * factors `gamma_order` holding `Gamma_1..Gamma_s`. Pass `gamma1 <= 0`
 * for the default.
 *
 * # Safety
 * `b`, `b_order`, and `gamma_order` must point to `s` doubles.
 */
enum LatcbcStatus latcbc_dcbc_pod(uint64_t n,
                                  size_t s,
                                  const double *b,
                                  const double *b_order,
                                  const double *gamma_order,
                                  double gamma1,
                                  struct LatcbcResult **out);

/**
 * Iterated CBC over the lambda-indexed weight family for bound data
 * `(b, B)`; `b_order` may be null for product-form data. Pass
 * `lambda0 <= 0`, `tau <= 0`, or `k_max == 0` for the defaults.
 *
 * # Safety
 * `b` must point to `s` doubles; `b_order` must be null or point to `s`
 * doubles.
 */
enum LatcbcStatus latcbc_icbc(uint64_t n,
                              size_t s,
                              const double *b,
                              const double *b_order,
                              double lambda0,
                              double tau,
                              size_t k_max,
                              struct LatcbcResult **out);

/**
 * Shift-averaged worst-case error of an explicit vector under product
 * weights, without a result handle.
 *
 * # Safety
 * `z` and `gamma` must point to `s` entries; `out` must be valid.
 */
enum LatcbcStatus latcbc_wce_product(uint64_t n,
                                     size_t s,
                                     const uint64_t *z,
                                     const double *gamma,
                                     double *out);

/**
 * Number of dimensions of a result. Returns 0 for a null handle.
 */
size_t latcbc_result_dimension(const struct LatcbcResult *handle);

/**
 * Modulus of a result. Returns 0 for a null handle.
 */
uint64_t latcbc_result_modulus(const struct LatcbcResult *handle);

/**
 * Copies the generating vector into `out_z` (`len >= dimension`).
 *
 * # Safety
 * `out_z` must point to at least `len` entries.
 */
enum LatcbcStatus latcbc_result_vector(const struct LatcbcResult *handle,
                                       uint64_t *out_z,
                                       size_t len);

/**
 * Copies the product weight factors `gamma_1..gamma_s` into `out`.
 *
 * # Safety
 * `out` must point to at least `len` entries.
 */
enum LatcbcStatus latcbc_result_weights(const struct LatcbcResult *handle, double *out, size_t len);

/**
 * Copies the order weight ratios `Gamma_l / Gamma_(l-1)` into `out`
 * (all ones for product schemes).
 *
 * # Safety
 * `out` must point to at least `len` entries.
 */
enum LatcbcStatus latcbc_result_order_ratios(const struct LatcbcResult *handle,
                                             double *out,
                                             size_t len);

/**
 * Final squared shift-averaged worst-case error.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum LatcbcStatus latcbc_result_wce_sq(const struct LatcbcResult *handle, double *out);

/**
 * Final certified RMS error bound `e_sh * sqrt(M)`; fails when the
 * construction ran without bound data.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum LatcbcStatus latcbc_result_rms_bound(const struct LatcbcResult *handle, double *out);

/**
 * Copies the per-dimension RMS bound history into `out`.
 *
 * # Safety
 * `out` must point to at least `len` entries.
 */
enum LatcbcStatus latcbc_result_rms_history(const struct LatcbcResult *handle,
                                            double *out,
                                            size_t len);

/**
 * Final lambda of an iterated run; fails for other algorithms.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum LatcbcStatus latcbc_result_lambda_star(const struct LatcbcResult *handle, double *out);

/**
 * Releases a result handle. Null is accepted.
 *
 * # Safety
 * `handle` must have come from a construction entry point and must not be
 * used afterwards.
 */
void latcbc_result_free(struct LatcbcResult *handle);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LATCBC_H */
