#ifndef WEBQUERY_H
#define WEBQUERY_H

/* Generated by cbindgen from the webquery-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum WqStatus {
  WQ_STATUS_OK = 0,
  // A required pointer argument was NULL.
  WQ_STATUS_NULL_ARGUMENT = 1,
  // Input text was not valid UTF-8.
  WQ_STATUS_UTF8_ERROR = 2,
  // The query text failed to parse (malformed JSON5/YAML).
  WQ_STATUS_SYNTAX_ERROR = 3,
  // The query document used an unknown keyword or wrong value type.
  WQ_STATUS_SCHEMA_ERROR = 4,
  // The query model violates an invariant; see the violations JSON.
  WQ_STATUS_INVALID_QUERY = 5,
  // Navigating the root URL failed.
  WQ_STATUS_NAVIGATION_ERROR = 6,
  // An expression used an unsupported XPath construct.
  WQ_STATUS_UNSUPPORTED_XPATH = 7,
  // An internal panic was caught at the boundary.
  WQ_STATUS_PANIC = 8,
} WqStatus;

// Query text format selector.
typedef enum WqFormat {
  // Sniff: a document starting with `{` or `[` is JSON5, otherwise YAML.
  WQ_FORMAT_AUTO = 0,
  WQ_FORMAT_JSON5 = 1,
  WQ_FORMAT_YAML = 2,
} WqFormat;

// An owned, parsed query. Opaque to C.
typedef struct WqQuery WqQuery;

// Execution knobs for [`wq_execute`]. Obtain defaults from
// [`wq_exec_options_default`] and adjust fields as needed.
typedef struct WqExecOptions {
  // How deep follow chains may nest.
  uint32_t max_follow_depth;
  // Hard cap on pages per paginated step.
  uint32_t max_pages_per_step;
  // Navigation timeout, seconds.
  uint32_t timeout_secs;
  // Pause between navigations, milliseconds.
  uint64_t politeness_delay_ms;
  // Escape non-ASCII characters in the records JSON as \uXXXX.
  bool ensure_ascii;
} WqExecOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Engine version as a static string; do not free.
const char *wq_version(void);

// Default execution options.
struct WqExecOptions wq_exec_options_default(void);

// Parses query text into a handle. On success stores the handle in
// `out_query`. On failure stores a diagnostic in `out_error` (when
// non-NULL) and returns the matching status.
//
// # Safety
// `text` must point to a NUL-terminated string; `out_query` must be a valid
// pointer; `out_error`, when non-NULL, must be valid for writes.
enum WqStatus wq_query_parse(const char *text,
                             enum WqFormat format,
                             struct WqQuery **out_query,
                             char **out_error);

// Validates a query and stores all invariant violations as a JSON array of
// `{"path": ..., "message": ...}` objects (empty array means valid).
//
// # Safety
// `query` must come from [`wq_query_parse`]; `out_violations_json` must be
// valid for writes.
enum WqStatus wq_query_validate(const struct WqQuery *query, char **out_violations_json);

// Derives the output shape of a valid query as JSON:
// `{"kind": "scalar"}`, `{"kind": "array", "element": ...}`, or
// `{"kind": "object", "keys": [{"name": ..., "shape": ...}]}`.
//
// # Safety
// `query` must come from [`wq_query_parse`]; `out_shape_json` must be valid
// for writes.
enum WqStatus wq_query_output_shape(const struct WqQuery *query, char **out_shape_json);

// Renders the query back to JSON5 text.
//
// # Safety
// `query` must come from [`wq_query_parse`]; `out_text` must be valid for
// writes.
enum WqStatus wq_query_to_json5(const struct WqQuery *query, char **out_text);

// Executes the query over the static HTTP backend and stores the records as
// a pretty-printed JSON array. `options` may be NULL for defaults. On
// failure a diagnostic lands in `out_error` (when non-NULL).
//
// # Safety
// `query` must come from [`wq_query_parse`]; `out_records_json` must be
// valid for writes; `options` and `out_error`, when non-NULL, must point to
// valid memory.
enum WqStatus wq_execute(const struct WqQuery *query,
                         const struct WqExecOptions *options,
                         char **out_records_json,
                         char **out_error);

// Releases a query handle. NULL is a no-op.
//
// # Safety
// `query` must be NULL or a pointer from [`wq_query_parse`] not yet freed.
void wq_query_free(struct WqQuery *query);

// Releases a string produced by this library. NULL is a no-op.
//
// # Safety
// `s` must be NULL or a pointer handed out by this library not yet freed.
void wq_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEBQUERY_H */
