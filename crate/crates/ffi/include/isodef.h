/* C interface to the isodef exact deformation-theory workbench. */

#ifndef ISODEF_H
#define ISODEF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Error class for arguments the binding layer itself rejects
 * (null pointers, invalid UTF-8, handle/kind mismatches).
 */
#define ISODEF_ERR_ARGUMENT 1

/**
 * Error class for malformed or schema-invalid input (exit code 2).
 */
#define ISODEF_ERR_INPUT 2

/**
 * Error class for violated mathematical preconditions (exit code 3).
 */
#define ISODEF_ERR_DOMAIN 3

/**
 * Error class for internal consistency failures (exit code 4).
 */
#define ISODEF_ERR_INTERNAL 4

/**
 * Opaque handle to a parsed problem.
 */
typedef struct IsodefProblem IsodefProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the library version as a static string; do not free it.
 */
const char *isodef_version(void);

/**
 * Parses a JSON problem. `expect_kind` may be null (infer the kind) or one
 * of "connection", "tuple", "dgla", "deform". Returns null on failure.
 *
 * # Safety
 * `json_text` and `expect_kind` must be valid NUL-terminated strings
 * (or null where documented).
 */
struct IsodefProblem *isodef_problem_parse(const char *json_text, const char *expect_kind);

/**
 * Returns the problem kind ("connection", "tuple", "dgla", "deform") as a
 * newly allocated string.
 *
 * # Safety
 * `handle` must be null or a pointer returned by `isodef_problem_parse`
 * that has not been freed.
 */
char *isodef_problem_kind(const struct IsodefProblem *handle);

/**
 * Releases a problem handle. Passing null is a no-op.
 *
 * # Safety
 * `handle` must be null or a pointer returned by `isodef_problem_parse`
 * that has not already been freed.
 */
void isodef_problem_free(struct IsodefProblem *handle);

/**
 * Cohomology report for a connection problem. Returns the JSON report, or
 * null on failure.
 *
 * # Safety
 * `handle` must be a live pointer returned by `isodef_problem_parse`.
 */
char *isodef_cohomology_report(const struct IsodefProblem *handle);

/**
 * Rigidity report for a monodromy tuple. Returns the JSON report, or null
 * on failure.
 *
 * # Safety
 * `handle` must be a live pointer returned by `isodef_problem_parse`.
 */
char *isodef_rigidity_report(const struct IsodefProblem *handle);

/**
 * Deformation report: lifts the jet to the given truncation order
 * (1 to 6). When `sharp` is true the obstruction class is computed at
 * every lifting step. Returns the JSON report, or null on failure.
 *
 * # Safety
 * `handle` must be a live pointer returned by `isodef_problem_parse`.
 */
char *isodef_deform_report(const struct IsodefProblem *handle, uint32_t order, bool sharp);

/**
 * DGLA report over the test ring given as `VARS:ORDER` (e.g. "e:3").
 * Returns the JSON report, or null on failure.
 *
 * # Safety
 * `handle` must be a live pointer returned by `isodef_problem_parse` and
 * `ring_spec` a valid NUL-terminated string.
 */
char *isodef_dgla_report(const struct IsodefProblem *handle, const char *ring_spec);

/**
 * Numeric class of the last error on this thread (0 if none):
 * 1 bad argument, 2 bad input, 3 domain precondition, 4 internal.
 */
int isodef_last_error_code(void);

/**
 * Kebab-case identifier of the last error on this thread, or null if none.
 */
char *isodef_last_error_kind(void);

/**
 * Human-readable message of the last error on this thread, or null if none.
 */
char *isodef_last_error_message(void);

/**
 * Releases a string returned by this library. Passing null is a no-op.
 *
 * # Safety
 * `s` must be null or a pointer returned by one of the report, kind, or
 * error accessors that has not already been freed.
 */
void isodef_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISODEF_H */
