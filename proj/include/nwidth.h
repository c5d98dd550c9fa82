/*
 * nwidth - order estimates for Kolmogorov n-widths of intersections of
 * weighted anisotropic balls in a mixed norm.
 *
 * C interface of the shared library: opaque handles, integer status codes,
 * UTF-8 JSON strings for structured reports.  Every function that can fail
 * returns nw_status; nw_last_error() describes the most recent failure on
 * the calling thread.  Strings returned through char** outputs are owned by
 * the caller and released with nw_string_free().
 */

#ifndef NWIDTH_H
#define NWIDTH_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define NW_API __declspec(dllexport)
#else
#define NW_API __attribute__((visibility("default")))
#endif

typedef enum nw_status {
  NW_OK = 0,
  NW_ERR_PARSE = 1,            /* malformed problem file */
  NW_ERR_VALIDATION = 2,       /* dimension, range or index violation */
  NW_ERR_CAPACITY = 3,         /* enumeration budget exceeded */
  NW_ERR_RETRY_EXHAUSTED = 4,  /* perturbation failed to reach general position */
  NW_ERR_INVALID_ARGUMENT = 5, /* null handle or out-of-range argument */
  NW_ERR_INTERNAL = 6
} nw_status;

typedef enum nw_z_kind {
  NW_Z_Q_FACE = 0,
  NW_Z_HALF_FACE = 1,
  NW_Z_OMEGA_EQUALIZER = 2
} nw_z_kind;

typedef enum nw_genpos_scope {
  NW_SCOPE_SAMPLED = 0,
  NW_SCOPE_FULL = 1
} nw_genpos_scope;

typedef struct nw_problem nw_problem;
typedef struct nw_result nw_result;

NW_API const char* nw_version(void);

/* Message of the last failure observed on this thread; never NULL. */
NW_API const char* nw_last_error(void);

NW_API void nw_string_free(char* str);

/* ---- problem files ----------------------------------------------------- */

/* Parses and validates a problem document (see README for the schema). */
NW_API nw_status nw_problem_parse(const char* json, nw_problem** out);
NW_API nw_status nw_problem_to_json(const nw_problem* problem, char** json_out);
NW_API void nw_problem_free(nw_problem* problem);

NW_API int nw_problem_dim(const nw_problem* problem);
NW_API int nw_problem_ball_count(const nw_problem* problem);
NW_API int64_t nw_problem_width_index(const nw_problem* problem);
NW_API int64_t nw_problem_max_width_index(const nw_problem* problem);

/* Returns a copy with the width index replaced (revalidated). */
NW_API nw_status nw_problem_with_n(const nw_problem* problem, int64_t n, nw_problem** out);

/* ---- the order estimate ------------------------------------------------ */

/*
 * Minimizes the weighted order expression over every admissible
 * (ball subset, candidate plane) pair and returns the value together with
 * the minimizing certificate.  tol <= 0 selects the default 1e-9; threads
 * <= 0 selects single-threaded evaluation.  Results are bit-identical for
 * any thread count.
 */
NW_API nw_status nw_estimate(const nw_problem* problem, double tol, int threads,
                             nw_result** out);
NW_API void nw_result_free(nw_result* result);

NW_API double nw_result_log_value(const nw_result* result);
NW_API double nw_result_value(const nw_result* result);
NW_API int nw_result_m(const nw_result* result);
/* Fills buf (length >= m) with 1-based ball indices. */
NW_API nw_status nw_result_ball_indices(const nw_result* result, int* buf, size_t buflen);
NW_API nw_z_kind nw_result_z_kind(const nw_result* result);
NW_API int nw_result_z_index_count(const nw_result* result);
/* Fills buf (length >= index count) with 1-based coordinate indices. */
NW_API nw_status nw_result_z_indices(const nw_result* result, int* buf, size_t buflen);
/* Fills buf (length >= m) with the simplex weights. */
NW_API nw_status nw_result_lambda(const nw_result* result, double* buf, size_t buflen);
/* Fills buf (length >= dim) with the reciprocal interpolated exponents. */
NW_API nw_status nw_result_theta_reciprocal(const nw_result* result, double* buf, size_t buflen);
NW_API int64_t nw_result_candidate_count(const nw_result* result);
/* Full result (certificate, runners-up, rejection diagnostics) as JSON. */
NW_API nw_status nw_result_to_json(const nw_result* result, char** json_out);

/* ---- wrapped subsystems, JSON reports ----------------------------------- */

/* One row per requested n: estimates with the width index replaced. */
NW_API nw_status nw_sweep_csv(const nw_problem* problem, const int64_t* n_values, size_t count,
                              double tol, int threads, char** csv_out);

/* Simplex-grid reference minimum with its certified error bound. */
NW_API nw_status nw_grid_min_json(const nw_problem* problem, int grid_r, int64_t max_points,
                                  char** json_out);

/* Randomized consistency report for the two order-estimate evaluators. */
NW_API nw_status nw_phi_check_json(int samples, int max_dim, uint64_t seed, char** json_out);

/* General-position report at the requested scope. */
NW_API nw_status nw_genpos_json(const nw_problem* problem, double tol, nw_genpos_scope scope,
                                uint64_t seed, char** json_out);

/* Perturbs into general position; displacement <= epsilon per coordinate. */
NW_API nw_status nw_perturb(const nw_problem* problem, double epsilon, uint64_t seed,
                            nw_genpos_scope scope, nw_problem** out);

/*
 * Lower-bound witness for one ball (1-based index; 0 selects the winner of
 * the estimate when its certificate has m = 1).  The report carries the
 * witness parameters and the containment check rows.
 */
NW_API nw_status nw_witness_json(const nw_problem* problem, int ball_one_based, double slack,
                                 char** json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NWIDTH_H */
