#ifndef CFML_H
#define CFML_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every call.
typedef enum CfmlStatus {
  CFML_STATUS_OK = 0,
  // A required pointer argument was null.
  CFML_STATUS_NULL_ARGUMENT = 1,
  // Graph text, generator spec or label file could not be parsed.
  CFML_STATUS_PARSE = 2,
  // The graph is not a cube-free median graph.
  CFML_STATUS_CLASS_VIOLATION = 3,
  // A vertex id is out of range.
  CFML_STATUS_INVALID_VERTEX = 4,
  // The graph is too large for the exhaustive check.
  CFML_STATUS_SIZE_GUARD = 5,
  // Decoding failed; the labels are inconsistent.
  CFML_STATUS_DECODE = 6,
  // A bug was caught at the boundary.
  CFML_STATUS_PANIC = 7,
  CFML_STATUS_OTHER = 8,
} CfmlStatus;

typedef enum CfmlLabelKind {
  CFML_LABEL_KIND_DISTANCE = 0,
  CFML_LABEL_KIND_ROUTING = 1,
} CfmlLabelKind;

typedef enum CfmlFormat {
  CFML_FORMAT_TEXT = 0,
  CFML_FORMAT_BINARY = 1,
} CfmlFormat;

// An immutable graph with port numbering.
typedef struct CfmlGraph CfmlGraph;

// Distance or routing labels for all vertices of one graph.
typedef struct CfmlLabels CfmlLabels;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread. The pointer stays valid
// until the next failing call on the same thread.
const char *cfml_last_error(void);

// Builds a graph from `edge_count` pairs stored flat in `edges`
// (`u0 v0 u1 v1 ...`). Ports follow the edge order.
//
// # Safety
// `edges` must point to `2 * edge_count` values; `out` must be writable.
enum CfmlStatus cfml_graph_from_edges(uint32_t vertex_count,
                                      const uint32_t *edges,
                                      size_t edge_count,
                                      struct CfmlGraph **out);

// Parses the text graph format (`n m` header, one `u v` edge per line).
//
// # Safety
// `source` must be NUL-terminated; `out` must be writable.
enum CfmlStatus cfml_graph_parse(const char *source, struct CfmlGraph **out);

// Builds a graph from a generator spec such as `grid:8x8`.
//
// # Safety
// `spec` must be NUL-terminated; `out` must be writable.
enum CfmlStatus cfml_graph_generate(const char *spec, struct CfmlGraph **out);

// # Safety
// `graph` must be a live handle; `out` must be writable.
enum CfmlStatus cfml_graph_vertex_count(const struct CfmlGraph *graph, uint32_t *out);

// # Safety
// `graph` must be a live handle; `out` must be writable.
enum CfmlStatus cfml_graph_edge_count(const struct CfmlGraph *graph, size_t *out);

// Neighbor of `v` behind `port` (1-based).
//
// # Safety
// `graph` must be a live handle; `out` must be writable.
enum CfmlStatus cfml_graph_neighbor(const struct CfmlGraph *graph,
                                    uint32_t v,
                                    uint32_t port,
                                    uint32_t *out);

// Exhaustive class check for graphs up to `bound` vertices.
//
// # Safety
// `graph` must be a live handle.
enum CfmlStatus cfml_graph_check(const struct CfmlGraph *graph, size_t bound);

// # Safety
// `graph` must be null or a handle not yet freed.
void cfml_graph_free(struct CfmlGraph *graph);

// Encodes labels of one kind for every vertex. With `skip_check` the
// caller vouches that the graph is cube-free median.
//
// # Safety
// `graph` must be a live handle; `out` must be writable.
enum CfmlStatus cfml_encode(const struct CfmlGraph *graph,
                            enum CfmlLabelKind kind,
                            bool skip_check,
                            struct CfmlLabels **out);

// # Safety
// `labels` must be a live handle; `out` must be writable.
enum CfmlStatus cfml_labels_kind(const struct CfmlLabels *labels, enum CfmlLabelKind *out);

// # Safety
// `labels` must be a live handle; `out` must be writable.
enum CfmlStatus cfml_labels_len(const struct CfmlLabels *labels, uint32_t *out);

// Distance (distance labels) or port toward `v` (routing labels, 0 when
// `u == v`).
//
// # Safety
// `labels` must be a live handle; `out` must be writable.
enum CfmlStatus cfml_query(const struct CfmlLabels *labels, uint32_t u, uint32_t v, uint32_t *out);

// Serializes labels into a new buffer, released with [`cfml_buffer_free`].
//
// # Safety
// `labels` must be a live handle; `out_data` and `out_len` must be writable.
enum CfmlStatus cfml_labels_save(const struct CfmlLabels *labels,
                                 enum CfmlFormat format,
                                 uint8_t **out_data,
                                 size_t *out_len);

// # Safety
// `data`/`len` must come from one [`cfml_labels_save`] call, or be null.
void cfml_buffer_free(uint8_t *data, size_t len);

// Loads a label file of either kind and format.
//
// # Safety
// `data` must point to `len` readable bytes; `out` must be writable.
enum CfmlStatus cfml_labels_load(const uint8_t *data, size_t len, struct CfmlLabels **out);

// # Safety
// `labels` must be null or a handle not yet freed.
void cfml_labels_free(struct CfmlLabels *labels);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CFML_H */
