#ifndef IGROUPOID_H
#define IGROUPOID_H

/* Generated from the Rust sources; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result discipline for every entry point.
 */
typedef enum IgtStatus {
  IGT_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  IGT_STATUS_NULL_ARGUMENT = 1,
  /*
   An input string was not valid UTF-8.
   */
  IGT_STATUS_INVALID_UTF8 = 2,
  /*
   The document did not parse or did not satisfy the format contract.
   */
  IGT_STATUS_PARSE = 3,
  /*
   The file could not be read.
   */
  IGT_STATUS_IO = 4,
  /*
   A label name is not in the table's alphabet.
   */
  IGT_STATUS_UNKNOWN_LABEL = 5,
  /*
   The product is not available (window overflow or empty composition).
   */
  IGT_STATUS_EVAL = 6,
} IgtStatus;

/*
 Opaque handle to a loaded table.
 */
typedef struct IgtTable IgtTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failing call on this thread. The pointer stays
 valid until the next failing call on the same thread. Never null.
 */
const char *igt_last_error(void);

/*
 Version of the library, as a static string. Do not free.
 */
const char *igt_version(void);

/*
 Parse a table document. On success `*out` owns the new handle.

 # Safety
 `json` must be a valid nul-terminated string; `out` must be writable.
 */
enum IgtStatus igt_table_from_json(const char *json, struct IgtTable **out);

/*
 Read and parse a table document from a file path.

 # Safety
 `path` must be a valid nul-terminated string; `out` must be writable.
 */
enum IgtStatus igt_table_from_file(const char *path, struct IgtTable **out);

/*
 Release a table handle. Null is a no-op.

 # Safety
 `t` must be a handle from this library, released at most once.
 */
void igt_table_free(struct IgtTable *t);

/*
 Release a string returned by this library. Null is a no-op.

 # Safety
 `s` must be a string from this library, released at most once.
 */
void igt_string_free(char *s);

/*
 Serialize the table back to its canonical document.

 # Safety
 `t` must be a live handle; `out` must be writable.
 */
enum IgtStatus igt_table_to_json(const struct IgtTable *t, char **out);

/*
 Run the axiom battery. `*passed` becomes 1 when no check failed, else 0.
 `report` may be null; otherwise it receives the report as JSON.

 # Safety
 `t` must be a live handle; `passed` must be writable.
 */
enum IgtStatus igt_table_validate(const struct IgtTable *t, int32_t *passed, char **report);

/*
 Structural report: relation classification, order witness, restriction
 lattice, and the potentially-unbounded part, as one JSON document.

 # Safety
 `t` must be a live handle; `out` must be writable.
 */
enum IgtStatus igt_table_analyze(const struct IgtTable *t, char **out);

/*
 Product of two labels by name. On success `*out` is a JSON array of
 label names. Unknown names report `UnknownLabel`; window overflow and
 empty compositions report `Eval`.

 # Safety
 `t` must be a live handle; `left`, `right`, `out` must be valid.
 */
enum IgtStatus igt_table_product(const struct IgtTable *t,
                                 const char *left,
                                 const char *right,
                                 char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* IGROUPOID_H */
