#ifndef RIEMAP_RIEMAP_H
#define RIEMAP_RIEMAP_H

/*
 * C interface to the riemap library.
 *
 * Every fallible call returns a riemap_status; on failure a description is
 * available from riemap_last_error() on the same thread until the next call.
 * Objects are opaque handles released with their *_free function (NULL is
 * accepted). Strings returned through char** are owned by the caller and
 * released with riemap_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(RIEMAP_BUILDING_LIBRARY)
#define RIEMAP_API __attribute__((visibility("default")))
#else
#define RIEMAP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum riemap_status {
  RIEMAP_OK = 0,
  RIEMAP_INVALID_ARGUMENT = 1,
  RIEMAP_POLICY_MISMATCH = 2,
  RIEMAP_NONZERO_CONSTANT = 3,
  RIEMAP_INDEX_OUT_OF_RANGE = 4,
  RIEMAP_NOT_UNIVALENT = 5,
  RIEMAP_NON_FINITE = 6,
  RIEMAP_PARSE_ERROR = 7,
  RIEMAP_INTERNAL_ERROR = 99
} riemap_status;

typedef enum riemap_format { RIEMAP_FORMAT_JSON = 0, RIEMAP_FORMAT_CSV = 1, RIEMAP_FORMAT_TEXT = 2 } riemap_format;

typedef struct riemap_policy {
  int n_max;
  int deg_max;
  int t0_max;
} riemap_policy;

typedef struct riemap_build_report {
  size_t keys_evaluated;
  size_t nonzero_terms;
  double elapsed_seconds;
} riemap_build_report;

typedef struct riemap_potential riemap_potential;
typedef struct riemap_moments riemap_moments;
typedef struct riemap_curve riemap_curve;
typedef struct riemap_map riemap_map;

RIEMAP_API const char* riemap_version(void);
RIEMAP_API const char* riemap_last_error(void);
RIEMAP_API void riemap_string_free(char* s);

/* Policy whose t0 bound never drops a term of the potential. */
RIEMAP_API riemap_policy riemap_policy_saturated(int n_max, int deg_max);

/* ---- potential ---- */

/* gradient_order < 0 selects n_max + deg_max + 1; threads == 0 uses all cores.
   report may be NULL. */
RIEMAP_API riemap_status riemap_potential_build(riemap_policy policy, int gradient_order, unsigned threads,
                                                riemap_potential** out, riemap_build_report* report);
RIEMAP_API riemap_status riemap_potential_from_json(const char* json, riemap_potential** out);
/* RIEMAP_FORMAT_JSON or RIEMAP_FORMAT_TEXT (regular part only). */
RIEMAP_API riemap_status riemap_potential_write(const riemap_potential* f, riemap_format format, char** out);
RIEMAP_API riemap_status riemap_potential_policy(const riemap_potential* f, riemap_policy* out);
RIEMAP_API riemap_status riemap_potential_term_count(const riemap_potential* f, size_t* out);
/* Coefficient of a monomial written as in the text form, e.g.
   "t0^2 * t2^1 * tbar2^1" or "1" for the constant; result as "p/q". */
RIEMAP_API riemap_status riemap_potential_coefficient(const riemap_potential* f, const char* monomial, char** out);
RIEMAP_API void riemap_potential_free(riemap_potential* f);

/* ---- moments ---- */

/* t holds n interleaved (re, im) pairs for t_1..t_n. */
RIEMAP_API riemap_status riemap_moments_create(double t0, const double* t, size_t n, riemap_moments** out);
RIEMAP_API riemap_status riemap_moments_from_json(const char* json, riemap_moments** out);
/* RIEMAP_FORMAT_JSON or RIEMAP_FORMAT_CSV. */
RIEMAP_API riemap_status riemap_moments_write(const riemap_moments* m, riemap_format format, char** out);
RIEMAP_API riemap_status riemap_moments_t0(const riemap_moments* m, double* t0);
RIEMAP_API riemap_status riemap_moments_count(const riemap_moments* m, size_t* n);
/* t_k for 1 <= k <= count. */
RIEMAP_API riemap_status riemap_moments_get(const riemap_moments* m, size_t k, double* re, double* im);
RIEMAP_API void riemap_moments_free(riemap_moments* m);

/* ---- boundary curves z(u) = r u + sum_j a_j u^-j ---- */

/* a holds count interleaved (re, im) pairs for a_0..a_{count-1}. */
RIEMAP_API riemap_status riemap_curve_create(double r, const double* a, size_t count, int samples,
                                             riemap_curve** out);
RIEMAP_API riemap_status riemap_curve_from_json(const char* json, riemap_curve** out);
RIEMAP_API riemap_status riemap_curve_write(const riemap_curve* c, char** json);
RIEMAP_API riemap_status riemap_curve_moments(const riemap_curve* c, int n, riemap_moments** out);
/* Writes v_0..v_n as n + 1 interleaved (re, im) pairs into out. */
RIEMAP_API riemap_status riemap_curve_dual_moments(const riemap_curve* c, int n, double* out);
RIEMAP_API void riemap_curve_free(riemap_curve* c);

/* ---- exterior map ---- */

/* order < 0 selects n_max + deg_max of the potential's policy. */
RIEMAP_API riemap_status riemap_map_from_potential(const riemap_potential* f, const riemap_moments* m, int order,
                                                   riemap_map** out);
RIEMAP_API riemap_status riemap_map_from_json(const char* json, riemap_map** out);
RIEMAP_API riemap_status riemap_map_write(const riemap_map* w, char** json);
RIEMAP_API riemap_status riemap_map_p(const riemap_map* w, double* p);
RIEMAP_API riemap_status riemap_map_order(const riemap_map* w, int* order);
/* p_j for 0 <= j <= order. */
RIEMAP_API riemap_status riemap_map_coefficient(const riemap_map* w, int j, double* re, double* im);
RIEMAP_API riemap_status riemap_map_evaluate(const riemap_map* w, double re, double im, double* out_re,
                                             double* out_im);
RIEMAP_API void riemap_map_free(riemap_map* w);

/* d_k F at the moments for k = 0..kmax (k = 0 includes the singular part),
   as kmax + 1 interleaved (re, im) pairs. */
RIEMAP_API riemap_status riemap_potential_gradient(const riemap_potential* f, const riemap_moments* m, int kmax,
                                                   double* out);

/* ---- coefficients and checks ---- */

/* N2 of a key given as (index, multiplicity) pairs, result as "p/q". */
RIEMAP_API riemap_status riemap_n2(const int* unbarred_pairs, size_t unbarred_count, const int* barred_pairs,
                                   size_t barred_count, char** out);
/* Every key with weight <= i_max, indices <= n_max, degree <= deg_max.
   RIEMAP_FORMAT_JSON or RIEMAP_FORMAT_CSV. */
RIEMAP_API riemap_status riemap_coefficient_table(int i_max, int n_max, int deg_max, riemap_format format,
                                                  char** out);
/* Builds F under policy and compares it with the ellipse closed form. */
RIEMAP_API riemap_status riemap_ellipse_check(riemap_policy policy, char** json, int* passed);

typedef struct riemap_convergence {
  int admissible;
  double bound;
} riemap_convergence;

RIEMAP_API riemap_status riemap_convergence_gate(const riemap_moments* m, int n, riemap_convergence* out);

RIEMAP_API riemap_status riemap_roundtrip(const riemap_curve* c, riemap_policy policy, int order, double radius,
                                          double* sup_error);

typedef struct riemap_verify_config {
  riemap_policy policy;
  int toda_order;
  int toda_deg_max;
  int map_order;
  double probe_radius;
  double roundtrip_tolerance;
  double dual_moment_tolerance;
  uint64_t seed;
  size_t bound_samples;
  const riemap_curve* curve; /* NULL selects z(u) = u + 0.05/u */
} riemap_verify_config;

RIEMAP_API void riemap_verify_config_default(riemap_verify_config* config);
/* JSON report {"passed": bool, "checks": [...]}; *passed is 1 if every
   check passed. */
RIEMAP_API riemap_status riemap_verify(const riemap_verify_config* config, char** json, int* passed);

#ifdef __cplusplus
}
#endif

#endif
