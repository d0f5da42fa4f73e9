#ifndef VISTRI_H
#define VISTRI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VistriStatus {
  VISTRI_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  VISTRI_STATUS_NULL_ARGUMENT = 1,
  /**
   * Malformed geometry, coordinates or parameters.
   */
  VISTRI_STATUS_INVALID_INPUT = 2,
  /**
   * The query point is outside the environment.
   */
  VISTRI_STATUS_OUTSIDE = 3,
  /**
   * A file could not be read or parsed.
   */
  VISTRI_STATUS_IO = 4,
  /**
   * An internal error or caught panic.
   */
  VISTRI_STATUS_INTERNAL = 5,
} VistriStatus;

/**
 * Opaque engine handle.
 */
typedef struct VistriEngine VistriEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds an engine from rings given as interleaved `x, y` coordinates.
 * `ring_sizes[i]` is the vertex count of ring `i`; the rings' coordinates
 * follow each other in `coords`. Rings are classified and oriented
 * automatically; rings that are not part of the connected region are dropped.
 */
enum VistriStatus vistri_engine_new(const double *coords,
                                    const size_t *ring_sizes,
                                    size_t num_rings,
                                    struct VistriEngine **out);

/**
 * Builds an engine from a `MAP v1` file.
 */
enum VistriStatus vistri_engine_from_file(const char *path, struct VistriEngine **out);

/**
 * Releases an engine. Null is ignored.
 */
void vistri_engine_free(struct VistriEngine *engine);

enum VistriStatus vistri_engine_num_vertices(const struct VistriEngine *engine, size_t *out);

/**
 * Visibility region of `(x, y)` as a ccw polygon of `*out_len` points stored
 * as interleaved coordinates. `range` may be null for unlimited visibility.
 * Free the array with [`vistri_coords_free`].
 */
enum VistriStatus vistri_visibility_region(const struct VistriEngine *engine,
                                           double x,
                                           double y,
                                           const double *range,
                                           double **out_coords,
                                           size_t *out_len);

/**
 * Releases a coordinate array of `len` points.
 */
void vistri_coords_free(double *coords, size_t len);

/**
 * Sets `*out_visible` to 1 if the segment from `(qx, qy)` to `(px, py)` lies
 * in the environment (and within `range`), else 0.
 */
enum VistriStatus vistri_two_point_visible(const struct VistriEngine *engine,
                                           double qx,
                                           double qy,
                                           double px,
                                           double py,
                                           const double *range,
                                           int32_t *out_visible);

/**
 * First boundary point hit by the ray from `(x, y)` along `(dx, dy)`.
 * `*out_hit` is 0 when nothing is hit within `range`.
 */
enum VistriStatus vistri_shoot_ray(const struct VistriEngine *engine,
                                   double x,
                                   double y,
                                   double dx,
                                   double dy,
                                   const double *range,
                                   int32_t *out_hit,
                                   double *out_x,
                                   double *out_y);

/**
 * Environment vertex ids visible from `(x, y)`, ascending. Free the array
 * with [`vistri_ids_free`].
 */
enum VistriStatus vistri_visible_vertices(const struct VistriEngine *engine,
                                          double x,
                                          double y,
                                          const double *range,
                                          size_t **out_ids,
                                          size_t *out_len);

void vistri_ids_free(size_t *ids, size_t len);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *vistri_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VISTRI_H */
