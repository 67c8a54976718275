#ifndef CUTCELL_H
#define CUTCELL_H

#include <stddef.h>
#include <stdint.h>

/*
 Result of a call.
 */
typedef enum CcStatus {
  CC_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  CC_STATUS_NULL_POINTER = 1,
  /*
   An argument was out of range or a string was not valid UTF-8.
   */
  CC_STATUS_INVALID_ARGUMENT = 2,
  /*
   An interface description could not be parsed.
   */
  CC_STATUS_PARSE = 3,
  /*
   A case or description does not fit the requested backend.
   */
  CC_STATUS_BACKEND_MISMATCH = 4,
  /*
   Quadrature generation or a solve failed.
   */
  CC_STATUS_FAILURE = 5,
  /*
   An output buffer is too small.
   */
  CC_STATUS_BUFFER_TOO_SMALL = 6,
  /*
   A bug inside the library.
   */
  CC_STATUS_INTERNAL = 7,
} CcStatus;

/*
 A trimming interface.
 */
typedef struct CcInterface CcInterface;

/*
 A quadrature rule over a trimmed mesh.
 */
typedef struct CcRule CcRule;

/*
 Summary of one elasticity benchmark solve.
 */
typedef struct CcBenchmarkResult {
  size_t n_dofs;
  size_t n_quad_points;
  double rel_l2_error;
  double cond_estimate;
} CcBenchmarkResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the most recent failure on this thread, or null. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *cc_last_error(void);

/*
 Builds one of the built-in geometries (`"circle"`, `"plate-hole"`, ...)
 for the backend `"implicit"` or `"parametric"`.

 # Safety
 `case_name` and `backend` must be null or NUL-terminated strings; `out`
 must be null or writable.
 */
enum CcStatus cc_interface_from_case(const char *case_name,
                                     const char *backend,
                                     struct CcInterface **out);

/*
 Parses a TOML interface description.

 # Safety
 `text` must be null or a NUL-terminated string; `out` must be null or
 writable.
 */
enum CcStatus cc_interface_from_toml(const char *text, struct CcInterface **out);

/*
 Releases an interface. Null is ignored.

 # Safety
 `iface` must be null or a handle not yet freed.
 */
void cc_interface_free(struct CcInterface *iface);

/*
 Writes 1 to `inside` when `(x, y)` lies in the retained region, else 0.

 # Safety
 `iface` must be null or a live handle; `inside` must be null or writable.
 */
enum CcStatus cc_interface_contains(const struct CcInterface *iface,
                                    double x,
                                    double y,
                                    int32_t *inside);

/*
 Area quadrature of the retained region on the unit square meshed with
 cells of size `h`, with `q` Gauss points per direction.

 # Safety
 `iface` must be null or a live handle; `out` must be null or writable.
 */
enum CcStatus cc_domain_quadrature(const struct CcInterface *iface,
                                   double h,
                                   size_t q,
                                   struct CcRule **out);

/*
 Quadrature along the interface inside the unit square, with outward
 normals.

 # Safety
 As for [`cc_domain_quadrature`].
 */
enum CcStatus cc_interface_quadrature(const struct CcInterface *iface,
                                      double h,
                                      size_t q,
                                      struct CcRule **out);

/*
 Releases a rule. Null is ignored.

 # Safety
 `rule` must be null or a handle not yet freed.
 */
void cc_rule_free(struct CcRule *rule);

/*
 Number of nodes in a rule; 0 for null.

 # Safety
 `rule` must be null or a live handle.
 */
size_t cc_rule_len(const struct CcRule *rule);

/*
 Sum of the weights of a rule.

 # Safety
 `rule` must be null or a live handle; `sum` must be null or writable.
 */
enum CcStatus cc_rule_weight_sum(const struct CcRule *rule, double *sum);

/*
 Copies node coordinates and weights into caller buffers of length `len`.
 `nx`/`ny` may be null when normals are not wanted; they are only filled
 for interface rules.

 # Safety
 Non-null buffers must hold at least `len` doubles.
 */
enum CcStatus cc_rule_nodes(const struct CcRule *rule,
                            double *x,
                            double *y,
                            double *w,
                            double *nx,
                            double *ny,
                            size_t len);

/*
 Solves an elasticity benchmark (`"plate-hole"` or `"square-plate"`) with
 spline degree `p`, mesh size `h` and quadrature order `q`.

 # Safety
 String arguments must be null or NUL-terminated; `result` must be null or
 writable.
 */
enum CcStatus cc_elasticity_benchmark(const char *case_name,
                                      const char *backend,
                                      size_t p,
                                      double h,
                                      size_t q,
                                      struct CcBenchmarkResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUTCELL_H */
