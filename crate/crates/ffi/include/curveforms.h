#ifndef CURVEFORMS_H
#define CURVEFORMS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Pipeline stage selector for [`cf_run_json`].
 */
typedef enum CfCommand {
  CF_COMMAND_NORMALIZE = 0,
  CF_COMMAND_CONDUCTOR = 1,
  CF_COMMAND_FORMS = 2,
  CF_COMMAND_CARTIER = 3,
  CF_COMMAND_INVARIANTS = 4,
} CfCommand;

/**
 * Status codes; 1 to 5 match the command-line exit codes.
 */
typedef enum CfStatus {
  CF_STATUS_OK = 0,
  CF_STATUS_PARSE = 1,
  CF_STATUS_VALIDATION = 2,
  CF_STATUS_INSEPARABLE = 3,
  CF_STATUS_ITERATION_LIMIT = 4,
  CF_STATUS_INTERNAL = 5,
  CF_STATUS_NULL_POINTER = 6,
  CF_STATUS_OUT_OF_RANGE = 7,
} CfStatus;

/**
 * A parsed plane curve.
 */
typedef struct CfCurve CfCurve;

/**
 * A basis of regular differentials together with its Cartier–Manin matrix.
 */
typedef struct CfForms CfForms;

/**
 * Invariants read off the Cartier–Manin matrix.
 */
typedef struct CfInvariants {
  size_t genus;
  size_t a_number;
  size_t p_rank;
  bool superspecial;
} CfInvariants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *cf_last_error(void);

/**
 * Parses `text` as a curve over F_p and stores a new handle in `out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CfStatus cf_curve_parse(uint64_t p, const char *text, struct CfCurve **out);

/**
 * # Safety
 * `curve` must come from [`cf_curve_parse`] and not be freed twice.
 */
void cf_curve_free(struct CfCurve *curve);

/**
 * Computes the differential basis and Cartier–Manin matrix of `curve`.
 * A `loop_cap` of 0 selects the default.
 *
 * # Safety
 * `curve` must be a live handle and `out` a valid pointer.
 */
enum CfStatus cf_forms_compute(const struct CfCurve *curve, size_t loop_cap, struct CfForms **out);

/**
 * # Safety
 * `forms` must come from [`cf_forms_compute`] and not be freed twice.
 */
void cf_forms_free(struct CfForms *forms);

/**
 * Genus, i.e. the number of numerators.
 *
 * # Safety
 * `forms` must be a live handle or null (which yields 0).
 */
size_t cf_forms_genus(const struct CfForms *forms);

/**
 * Numerator `i` rendered as a string; free it with [`cf_string_free`].
 *
 * # Safety
 * `forms` must be a live handle and `out` a valid pointer.
 */
enum CfStatus cf_forms_numerator(const struct CfForms *forms, size_t i, char **out);

/**
 * The common denominator F_y; free it with [`cf_string_free`].
 *
 * # Safety
 * `forms` must be a live handle and `out` a valid pointer.
 */
enum CfStatus cf_forms_denominator(const struct CfForms *forms, char **out);

/**
 * Copies the g×g Cartier–Manin matrix, row-major with columns as images,
 * into `buf`, which must hold at least `len` ≥ g² entries.
 *
 * # Safety
 * `forms` must be a live handle and `buf` valid for `len` writes.
 */
enum CfStatus cf_forms_cartier_matrix(const struct CfForms *forms, uint32_t *buf, size_t len);

/**
 * Genus, a-number, p-rank and superspeciality.
 *
 * # Safety
 * `forms` must be a live handle and `out` a valid pointer.
 */
enum CfStatus cf_forms_invariants(const struct CfForms *forms, struct CfInvariants *out);

/**
 * Runs one pipeline stage and returns the JSON report; free it with
 * [`cf_string_free`]. A `loop_cap` of 0 selects the default.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CfStatus cf_run_json(enum CfCommand command,
                          uint64_t p,
                          const char *text,
                          size_t loop_cap,
                          char **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void cf_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CURVEFORMS_H */
