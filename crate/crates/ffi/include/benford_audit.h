#ifndef BENFORD_AUDIT_H
#define BENFORD_AUDIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every FFI call.
 */
typedef enum BaStatus {
  BA_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  BA_STATUS_NULL_POINTER = 1,
  /**
   * An argument was structurally invalid (bad base, bad UTF-8, ...).
   */
  BA_STATUS_INVALID_ARGUMENT = 2,
  /**
   * An argument lies outside the mathematical domain of the operation.
   */
  BA_STATUS_DOMAIN_ERROR = 3,
  /**
   * The request exceeds an exact-representation budget.
   */
  BA_STATUS_CAPACITY_ERROR = 4,
  /**
   * Malformed serialized input.
   */
  BA_STATUS_FORMAT_ERROR = 5,
  /**
   * No usable data.
   */
  BA_STATUS_EMPTY_DATA = 6,
  BA_STATUS_IO_ERROR = 7,
  /**
   * The library caught a panic instead of unwinding across the ABI.
   */
  BA_STATUS_PANIC = 8,
} BaStatus;

/**
 * Opaque handle to a piecewise mod-1 CDF.
 */
typedef struct BaModOneCdf BaModOneCdf;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread. Never null.
 */
const char *ba_last_error_message(void);

/**
 * Library version as a static C string.
 */
const char *ba_version(void);

/**
 * CDF of `frac(log_b X)` for `X = U * b^theta`, `U` uniform on (0, 1].
 */
enum BaStatus ba_cdf_uniform_phase(double theta, uint32_t base, struct BaModOneCdf **out);

/**
 * CDF of `frac(log_b X)` for `X` uniform on `(lo, hi)`, `0 <= lo < hi`.
 */
enum BaStatus ba_cdf_log_uniform(double lo, double hi, uint32_t base, struct BaModOneCdf **out);

/**
 * CDF of `frac(log_b X)` for `X` uniform on `(0, t)`.
 */
enum BaStatus ba_cdf_uniform_continuous(double t, uint32_t eval_base, struct BaModOneCdf **out);

/**
 * CDF of `frac(log_b X)` for `X = dist_base^(a U)`, `U` uniform on (0, 1).
 */
enum BaStatus ba_cdf_power_of_uniform(double a,
                                      uint32_t dist_base,
                                      uint32_t eval_base,
                                      struct BaModOneCdf **out);

/**
 * CDF of `frac(log_b X)` for `X` Benford-distributed on one decade
 * `[dist_base^k, dist_base^(k+1))`.
 */
enum BaStatus ba_cdf_benford_decade(int32_t k,
                                    uint32_t dist_base,
                                    uint32_t eval_base,
                                    struct BaModOneCdf **out);

/**
 * CDF of `frac(log_b X)` for `X` uniform on the integers `{1, ..., n}`.
 */
enum BaStatus ba_cdf_uniform_integers(uint64_t n, uint32_t eval_base, struct BaModOneCdf **out);

/**
 * Parse a CDF from the JSON produced by [`ba_cdf_to_json`].
 */
enum BaStatus ba_cdf_from_json(const char *text, struct BaModOneCdf **out);

/**
 * New CDF of `frac(S + delta)` where `S` follows the given CDF.
 */
enum BaStatus ba_cdf_shift(const struct BaModOneCdf *cdf, double delta, struct BaModOneCdf **out);

/**
 * Release a CDF handle. Null is accepted and ignored.
 */
void ba_cdf_free(struct BaModOneCdf *cdf);

/**
 * Right-continuous CDF value `P(S <= s)`; `s` is clamped to [0, 1].
 */
enum BaStatus ba_cdf_evaluate(const struct BaModOneCdf *cdf, double s, double *out);

/**
 * Left limit `P(S < s)`.
 */
enum BaStatus ba_cdf_evaluate_left(const struct BaModOneCdf *cdf, double s, double *out);

/**
 * Radix the CDF's logarithm was taken in.
 */
enum BaStatus ba_cdf_base(const struct BaModOneCdf *cdf, uint32_t *out);

/**
 * Serialize the piece table to JSON. The string is owned by the caller
 * and must be released with [`ba_string_free`].
 */
enum BaStatus ba_cdf_to_json(const struct BaModOneCdf *cdf, char **out);

/**
 * Release a string returned by this library. Null is accepted and ignored.
 */
void ba_string_free(char *s);

/**
 * Exact Kolmogorov-Smirnov distance to the uniform mod-1 law, with the
 * location where the supremum is attained.
 */
enum BaStatus ba_cdf_ks(const struct BaModOneCdf *cdf, double *out_statistic, double *out_location);

/**
 * Exact L1 (Wasserstein) distance to the uniform mod-1 law.
 */
enum BaStatus ba_cdf_wasserstein(const struct BaModOneCdf *cdf, double *out);

/**
 * Base-b significand and exponent of a positive finite `x`.
 */
enum BaStatus ba_significand(double x, uint32_t base, double *out_value, int32_t *out_exponent);

/**
 * First significant digit of `x` in the given base.
 */
enum BaStatus ba_first_digit(double x, uint32_t base, uint32_t *out);

/**
 * Fractional part of `log_b x`, in [0, 1).
 */
enum BaStatus ba_log_fraction(double x, uint32_t base, double *out);

/**
 * Benford first-digit law `log_b(1 + 1/d)`.
 */
enum BaStatus ba_benford_first_digit_pmf(uint32_t digit, uint32_t base, double *out);

/**
 * KS distance between the empirical law of `frac(log_b x_i)` and uniform.
 */
enum BaStatus ba_empirical_ks(const double *values, size_t len, uint32_t base, double *out);

/**
 * Pearson chi-square of observed first digits against the Benford law,
 * with `base - 2` degrees of freedom.
 */
enum BaStatus ba_first_digit_chisq(const double *values,
                                   size_t len,
                                   uint32_t base,
                                   double *out_statistic,
                                   uint32_t *out_dof);

/**
 * Sharp lower bound on the worst-case KS distance over scale phases.
 */
enum BaStatus ba_prop1_bound(uint32_t base, double *out);

/**
 * Phase minimizing the KS distance of `frac(log_b(U b^theta))` to uniform,
 * found by a grid scan (at least 16 points) plus golden-section refinement.
 */
enum BaStatus ba_minimize_phase(uint32_t base,
                                size_t grid_size,
                                double *out_theta,
                                double *out_distance);

/**
 * Exact probability that a uniform integer from `{1, ..., N}` has first
 * digit 1, where `N = base^n`. Fails with `BA_STATUS_CAPACITY_ERROR` when
 * the reduced fraction does not fit in 64-bit integers.
 */
enum BaStatus ba_leading_one_fraction(uint32_t n,
                                      uint32_t base,
                                      uint64_t *out_numerator,
                                      uint64_t *out_denominator);

/**
 * Limit of [`ba_leading_one_fraction`] as `n` grows.
 */
enum BaStatus ba_leading_one_limit(uint32_t base, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BENFORD_AUDIT_H */
