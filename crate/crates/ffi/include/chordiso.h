#ifndef CHORDISO_H
#define CHORDISO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every function.
 */
typedef enum ChordisoStatus {
  CHORDISO_STATUS_OK = 0,
  CHORDISO_STATUS_NULL_POINTER = 1,
  CHORDISO_STATUS_INVALID_ARGUMENT = 2,
  CHORDISO_STATUS_PARSE = 3,
  CHORDISO_STATUS_NOT_CHORDAL = 4,
  CHORDISO_STATUS_BUFFER_TOO_SMALL = 5,
  CHORDISO_STATUS_INTERNAL = 6,
  CHORDISO_STATUS_PANIC = 7,
} ChordisoStatus;

/*
 Opaque graph handle.
 */
typedef struct ChordisoGraph ChordisoGraph;

/*
 Opaque permutation group handle.
 */
typedef struct ChordisoGroup ChordisoGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread. Valid until the next call.
 */
const char *chordiso_last_error(void);

/*
 Graph on `n` vertices with `m` edges given as `2m` endpoints.

 # Safety
 `edges` must point to `2 * m` readable values, or be null when `m == 0`.
 */
enum ChordisoStatus chordiso_graph_from_edges(size_t n,
                                              const size_t *edges,
                                              size_t m,
                                              struct ChordisoGraph **out);

/*
 Parses graph6 or edge-list text.

 # Safety
 `text` must be a nul-terminated string.
 */
enum ChordisoStatus chordiso_graph_parse(const char *text, struct ChordisoGraph **out);

/*
 # Safety
 `g` must come from this library or be null.
 */
void chordiso_graph_free(struct ChordisoGraph *g);

/*
 Number of vertices, 0 for null.

 # Safety
 `g` must be a live handle or null.
 */
size_t chordiso_graph_order(const struct ChordisoGraph *g);

/*
 Automorphism group of a chordal graph. `colors` may be null; otherwise it
 holds one color per vertex. `leafage_bound == 0` selects the bound automatically.

 # Safety
 `g` must be a live handle; `colors`, when non-null, must hold `n` values.
 */
enum ChordisoStatus chordiso_aut(const struct ChordisoGraph *g,
                                 const size_t *colors,
                                 size_t leafage_bound,
                                 struct ChordisoGroup **out);

/*
 # Safety
 `h` must come from this library or be null.
 */
void chordiso_group_free(struct ChordisoGroup *h);

/*
 # Safety
 `h` must be a live handle or null.
 */
size_t chordiso_group_degree(const struct ChordisoGroup *h);

/*
 # Safety
 `h` must be a live handle or null.
 */
size_t chordiso_group_num_generators(const struct ChordisoGroup *h);

/*
 Leafage bound the computation settled on.

 # Safety
 `h` must be a live handle or null.
 */
size_t chordiso_group_leafage_bound(const struct ChordisoGroup *h);

/*
 Copies the images of generator `i` into `buf`, which holds `len` values.

 # Safety
 `h` must be a live handle; `buf` must hold `len` writable values.
 */
enum ChordisoStatus chordiso_group_generator(const struct ChordisoGroup *h,
                                             size_t i,
                                             size_t *buf,
                                             size_t len);

/*
 Writes the group order as a nul-terminated decimal string. `needed`
 receives the buffer size required, including the terminator.

 # Safety
 `h` must be a live handle; `buf` must hold `len` bytes or be null with `len == 0`.
 */
enum ChordisoStatus chordiso_group_order(const struct ChordisoGroup *h,
                                         char *buf,
                                         size_t len,
                                         size_t *needed);

/*
 Isomorphism test. On success `*found` tells whether one exists and, if so,
 `mapping` (holding `len` values) receives the images of the vertices of `a`.

 # Safety
 `a` and `b` must be live handles; `mapping` must hold `len` writable values.
 */
enum ChordisoStatus chordiso_iso(const struct ChordisoGraph *a,
                                 const struct ChordisoGraph *b,
                                 size_t leafage_bound,
                                 size_t *mapping,
                                 size_t len,
                                 bool *found);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHORDISO_H */
