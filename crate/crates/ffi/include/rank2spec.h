#ifndef RANK2SPEC_H
#define RANK2SPEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum R2sFamily {
  R2S_FAMILY_G = 0,
  R2S_FAMILY_H = 1,
} R2sFamily;

typedef enum R2sOrbitKind {
  R2S_ORBIT_KIND_C = 0,
  R2S_ORBIT_KIND_S = 1,
} R2sOrbitKind;

typedef enum R2sStatus {
  R2S_STATUS_OK = 0,
  R2S_STATUS_NULL_POINTER = 1,
  R2S_STATUS_INVALID_ARGUMENT = 2,
  R2S_STATUS_UNKNOWN_GROUP = 3,
  R2S_STATUS_NUMERICAL = 4,
  R2S_STATUS_OVERFLOW = 5,
  R2S_STATUS_INTERNAL = 6,
  R2S_STATUS_PANIC = 7,
} R2sStatus;

typedef struct R2sDensity R2sDensity;

typedef struct R2sGraph R2sGraph;

typedef struct R2sGroup R2sGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. Free with `r2s_string_free`.
 */
char *r2s_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void r2s_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *r2s_version(void);

/**
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum R2sStatus r2s_group_new(const char *name, struct R2sGroup **out);

/**
 * # Safety
 * `g` must come from `r2s_group_new` and not have been freed.
 */
void r2s_group_free(struct R2sGroup *g);

/**
 * # Safety
 * `g` must be a live group handle; `out` must be writable.
 */
enum R2sStatus r2s_group_order(const struct R2sGroup *g, size_t *out);

/**
 * Character of the irreducible with highest weight `(l1, l2)` as
 * `(e1,e2): coeff` lines.
 *
 * # Safety
 * `g` must be a live group handle; `out` must be writable.
 */
enum R2sStatus r2s_character_text(const struct R2sGroup *g, int64_t l1, int64_t l2, char **out);

/**
 * Constant term of `F_a * conj(F_b)` for C- or S-functions. Fits in 64 bits
 * since it is 0 or a multiple of the group order.
 *
 * # Safety
 * `g` must be a live group handle; `out` must be writable.
 */
enum R2sStatus r2s_orthogonality(const struct R2sGroup *g,
                                 enum R2sOrbitKind kind,
                                 int64_t a1,
                                 int64_t a2,
                                 int64_t b1,
                                 int64_t b2,
                                 int64_t *out);

/**
 * # Safety
 * `group` must be a NUL-terminated string; `out` must be writable.
 */
enum R2sStatus r2s_graph_new(enum R2sFamily fam,
                             const char *group,
                             int64_t rho1,
                             int64_t rho2,
                             int64_t radius,
                             struct R2sGraph **out);

/**
 * # Safety
 * `g` must come from `r2s_graph_new` and not have been freed.
 */
void r2s_graph_free(struct R2sGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum R2sStatus r2s_graph_vertex_count(const struct R2sGraph *g, size_t *out);

/**
 * Radius needed for `r2s_graph_moment(m, n)` on this graph's generator.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum R2sStatus r2s_graph_required_radius(const struct R2sGraph *g,
                                         uint32_t m,
                                         uint32_t n,
                                         int64_t *out);

/**
 * Path-count moment as a decimal string.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum R2sStatus r2s_graph_moment(const struct R2sGraph *g, uint32_t m, uint32_t n, char **out);

/**
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum R2sStatus r2s_graph_to_json(const struct R2sGraph *g, char **out);

/**
 * Exact joint moment `int chi1^m1 conj(chi1)^n1 chi2^m2 conj(chi2)^n2` as a decimal string.
 *
 * # Safety
 * `group` must be a NUL-terminated string; `out` must be writable.
 */
enum R2sStatus r2s_moment_exact(enum R2sFamily fam,
                                const char *group,
                                uint32_t m1,
                                uint32_t n1,
                                uint32_t m2,
                                uint32_t n2,
                                char **out);

/**
 * Number of diagonal-step quadrant walks of length 2n returning to the origin.
 *
 * # Safety
 * `out` must be writable.
 */
enum R2sStatus r2s_count_walks_quadrant(size_t n, char **out);

/**
 * # Safety
 * `id` must be a NUL-terminated catalog id; `out` must be writable.
 */
enum R2sStatus r2s_density_new(const char *id, struct R2sDensity **out);

/**
 * # Safety
 * `d` must come from `r2s_density_new` and not have been freed.
 */
void r2s_density_free(struct R2sDensity *d);

/**
 * Number of coordinates the density takes.
 *
 * # Safety
 * `d` must be a live density handle; `out` must be writable.
 */
enum R2sStatus r2s_density_dim(const struct R2sDensity *d, size_t *out);

/**
 * # Safety
 * `d` must be a live density handle; `point` must hold `len` doubles; `out` must be writable.
 */
enum R2sStatus r2s_density_eval(const struct R2sDensity *d,
                                const double *point,
                                size_t len,
                                double *out);

/**
 * Runs acceptance criterion `number` (1 to 12). `passed` receives 1 or 0.
 *
 * # Safety
 * `passed` must be writable.
 */
enum R2sStatus r2s_run_criterion(uint32_t number, uint64_t seed, int *passed);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* RANK2SPEC_H */
