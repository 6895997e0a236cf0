#ifndef GROUPLAT_H
#define GROUPLAT_H

/* This file is generated by cbindgen from the grouplat-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes of every `grouplat_*` call. `PARSE_ERROR` and
 `PRECONDITION` match the CLI exit codes 2 and 3.
 */
typedef enum GrouplatStatus {
  GROUPLAT_STATUS_OK = 0,
  GROUPLAT_STATUS_PARSE_ERROR = 2,
  GROUPLAT_STATUS_PRECONDITION = 3,
  GROUPLAT_STATUS_NULL_POINTER = 4,
  GROUPLAT_STATUS_INVALID_UTF8 = 5,
  GROUPLAT_STATUS_INTERNAL = 6,
} GrouplatStatus;

/*
 Opaque handle to a folded subgroup graph (a Stallings graph) together
 with its alphabet.
 */
typedef struct GrouplatGraph GrouplatGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Runs one JSON task (same schema as the `grouplat run` subcommand) and
 writes the JSON result to `out`. A negative `check_oracle_budget`
 disables oracle verification.

 # Safety
 `task_json` must be a valid NUL-terminated string and `out` a valid
 pointer to writable storage.
 */
enum GrouplatStatus grouplat_run_task(const char *task_json,
                                      int64_t check_oracle_budget,
                                      bool compact,
                                      char **out);

/*
 Builds the folded Stallings graph of a subgroup. `alphabet_json` is a
 JSON array of generator names, `generators_json` a JSON array of
 subgroup generator words in word syntax.

 # Safety
 Both strings must be valid NUL-terminated strings; `out_graph` must
 point to writable storage. The returned handle must be freed with
 [`grouplat_graph_free`].
 */
enum GrouplatStatus grouplat_graph_new(const char *alphabet_json,
                                       const char *generators_json,
                                       struct GrouplatGraph **out_graph,
                                       char **out_error);

/*
 Subgroup membership of a word given in word syntax.

 # Safety
 `graph` must be a live handle from [`grouplat_graph_new`]; `word` a
 valid string; `out_member` writable.
 */
enum GrouplatStatus grouplat_graph_contains(const struct GrouplatGraph *graph,
                                            const char *word,
                                            bool *out_member);

/*
 Closest subgroup element to `word` and the distance.

 # Safety
 As for [`grouplat_graph_contains`]; `out_witness` receives an owned
 string.
 */
enum GrouplatStatus grouplat_graph_closest(const struct GrouplatGraph *graph,
                                           const char *word,
                                           char **out_witness,
                                           uintptr_t *out_distance);

/*
 Shortest nontrivial subgroup element. `out_found` is false for the
 trivial subgroup, in which case witness and length are not written.

 # Safety
 As for [`grouplat_graph_closest`].
 */
enum GrouplatStatus grouplat_graph_shortest(const struct GrouplatGraph *graph,
                                            char **out_witness,
                                            uintptr_t *out_length,
                                            bool *out_found);

/*
 DOT rendering of the folded graph.

 # Safety
 `graph` must be a live handle; `out_dot` writable.
 */
enum GrouplatStatus grouplat_graph_dot(const struct GrouplatGraph *graph, char **out_dot);

/*
 Releases a graph handle.

 # Safety
 `graph` must come from [`grouplat_graph_new`] and not be used again.
 */
void grouplat_graph_free(struct GrouplatGraph *graph);

/*
 Releases a string returned by any `grouplat_*` call.

 # Safety
 `s` must come from this library and not be used again.
 */
void grouplat_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GROUPLAT_H */
