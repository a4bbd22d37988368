#ifndef GSTABLE_H
#define GSTABLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum GstableStatus {
  GSTABLE_STATUS_OK = 0,
  // A required pointer argument was null.
  GSTABLE_STATUS_NULL_ARGUMENT = 1,
  // An input string was not UTF-8.
  GSTABLE_STATUS_INVALID_UTF8 = 2,
  // Malformed JSON or a shape the schema does not accept.
  GSTABLE_STATUS_JSON = 3,
  // A field failed validation; the message names the field.
  GSTABLE_STATUS_VALIDATION = 4,
  // The document carries an unsupported schema version.
  GSTABLE_STATUS_SCHEMA = 5,
  // A configured size cap was exceeded.
  GSTABLE_STATUS_SIZE_LIMIT = 6,
  // Any other library error.
  GSTABLE_STATUS_FAILED = 7,
  // The library panicked. This is a bug.
  GSTABLE_STATUS_PANIC = 8,
} GstableStatus;

// A parsed problem description.
typedef struct GstableProblem GstableProblem;

// An analysis report with its witnesses.
typedef struct GstableReport GstableReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer stays
// valid until the next call into the library on this thread.
const char *gstable_last_error(void);

// Library version as a static string.
const char *gstable_version(void);

// Parses a problem document.
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum GstableStatus gstable_problem_from_json(const char *json, struct GstableProblem **out);

// Replaces the seed used by randomized searches.
//
// # Safety
// `problem` must be a handle from [`gstable_problem_from_json`].
enum GstableStatus gstable_problem_set_seed(struct GstableProblem *problem, uint64_t seed);

// Releases a problem. Null is ignored.
//
// # Safety
// `problem` must be null or a handle not yet freed.
void gstable_problem_free(struct GstableProblem *problem);

// Runs the requested analyses.
//
// # Safety
// `problem` must be a live handle and `out` a valid pointer.
enum GstableStatus gstable_run(const struct GstableProblem *problem, struct GstableReport **out);

// Parses a report document, for example one written by the command line tool.
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum GstableStatus gstable_report_from_json(const char *json, struct GstableReport **out);

// Serializes a report. Free the string with [`gstable_string_free`].
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum GstableStatus gstable_report_to_json(const struct GstableReport *report, char **out);

// Whether some decided verdict in the report is negative.
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum GstableStatus gstable_report_has_negative(const struct GstableReport *report, bool *out);

// Re-checks every witness in a report. `passed` receives the overall result.
// If `checks` is not null it receives a JSON array of `{name, ok, detail}`.
//
// # Safety
// `report` must be a live handle, `passed` a valid pointer, `checks` null or valid.
enum GstableStatus gstable_verify(const struct GstableReport *report, bool *passed, char **checks);

// Releases a report. Null is ignored.
//
// # Safety
// `report` must be null or a handle not yet freed.
void gstable_report_free(struct GstableReport *report);

// Checks a standalone Schreier system document and writes the JSON result.
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum GstableStatus gstable_schreier(const char *json, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void gstable_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GSTABLE_H */
