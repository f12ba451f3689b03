#ifndef ENCAP_H
#define ENCAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EncapStatus {
  ENCAP_STATUS_OK = 0,
  ENCAP_STATUS_NULL_POINTER = 1,
  ENCAP_STATUS_INVALID = 2,
  ENCAP_STATUS_PARSE = 3,
  ENCAP_STATUS_CAP_EXCEEDED = 4,
  ENCAP_STATUS_UNDEFINED = 5,
  ENCAP_STATUS_IO = 6,
  ENCAP_STATUS_PANIC = 7,
} EncapStatus;

/**
 * Opaque system handle.
 */
typedef struct EncapSystem EncapSystem;

typedef struct EncapMetrics {
  uint64_t nodes;
  uint64_t regions;
  uint64_t violating;
  uint64_t psc;
  uint64_t s_max;
  double s_min;
  double c_e;
  double ihv_percent;
  double r_min;
} EncapMetrics;

typedef struct EncapAmc {
  bool comparable;
  bool is_amc;
  bool below_s_min;
  uint64_t psc;
  double uniform_psc_same_r;
  double s_min;
} EncapAmc;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *encap_last_error_message(void);

/**
 * Parses a manifest (UTF-8, NUL-terminated) into a new handle.
 *
 * # Safety
 * `text` must be a valid C string; `out` must point to writable storage.
 */
enum EncapStatus encap_system_from_manifest(const char *text, struct EncapSystem **out);

/**
 * Builds a flat system from `len` parallel hidden/violating counts.
 *
 * # Safety
 * Both arrays must hold `len` elements (they may be null when `len` is 0);
 * `out` must point to writable storage.
 */
enum EncapStatus encap_system_new_flat(const uint64_t *hidden,
                                       const uint64_t *violating,
                                       size_t len,
                                       struct EncapSystem **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `sys` must come from this library and not be used afterwards.
 */
void encap_system_free(struct EncapSystem *sys);

/**
 * P.S.C. in the system's own context (flat closed form, or enumeration
 * for layered and hierarchical systems).
 *
 * # Safety
 * `sys` must be a live handle; `out` must point to writable storage.
 */
enum EncapStatus encap_system_psc(const struct EncapSystem *sys, uint64_t *out);

/**
 * Metrics of the system taken as one flat list of regions.
 *
 * # Safety
 * `sys` must be a live handle; `out` must point to writable storage.
 */
enum EncapStatus encap_system_metrics(const struct EncapSystem *sys, struct EncapMetrics *out);

/**
 * A.M.C. verdict of the system taken as one flat list of regions.
 *
 * # Safety
 * `sys` must be a live handle; `out` must point to writable storage.
 */
enum EncapStatus encap_system_amc(const struct EncapSystem *sys, struct EncapAmc *out);

/**
 * `n(n - 1)`.
 */
uint64_t encap_psc_unencapsulated(uint64_t n);

/**
 * # Safety
 * `out` must point to writable storage.
 */
enum EncapStatus encap_r_min(uint64_t n, double p, double *out);

/**
 * # Safety
 * `out` must point to writable storage.
 */
enum EncapStatus encap_r_h(uint64_t n, double p, double *out);

/**
 * # Safety
 * `out` must point to writable storage.
 */
enum EncapStatus encap_s_min(uint64_t n, double p, double *out);

/**
 * # Safety
 * `out` must point to writable storage.
 */
enum EncapStatus encap_uniform_psc(double n, double r, double p, double *out);

/**
 * Integer region count near `r_min` with the lower uniform P.S.C.
 *
 * # Safety
 * `r_out` and `psc_out` must point to writable storage.
 */
enum EncapStatus encap_recommend_regions(uint64_t n, double p, uint64_t *r_out, double *psc_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENCAP_H */
