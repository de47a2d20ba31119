/* SPDX-License-Identifier: Apache-2.0 */
#ifndef ELASTICA_ELASTICA_H
#define ELASTICA_ELASTICA_H

#include <stddef.h>

#if defined(_WIN32)
#define ELASTICA_API __declspec(dllexport)
#else
#define ELASTICA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define ELASTICA_VERSION "0.1.0"

typedef enum elastica_status {
  ELASTICA_OK = 0,
  ELASTICA_INVALID_ARGUMENT,
  ELASTICA_GRID_TOO_COARSE,
  ELASTICA_NON_FINITE_VALUE,
  ELASTICA_NON_CONVERGENCE,
  ELASTICA_SINGULAR_OPERATOR,
  ELASTICA_INVALID_WEIGHT,
  ELASTICA_H_TOO_SMALL,
  ELASTICA_BOUNDARY_MISMATCH,
  ELASTICA_NO_NONTRIVIAL_BRANCH,
  ELASTICA_MAX_ITERATIONS,
  ELASTICA_RESONANT,
  ELASTICA_LINE_SEARCH_FAILURE,
  ELASTICA_IO_FAILURE,
  ELASTICA_INTERNAL_ERROR
} elastica_status;

/* Outcome of an iterative optimization (not an error code). */
typedef enum elastica_solve_status {
  ELASTICA_SOLVE_CONVERGED = 0,
  ELASTICA_SOLVE_MAX_ITER,
  ELASTICA_SOLVE_RESONANT,
  ELASTICA_SOLVE_DIVERGED
} elastica_solve_status;

typedef struct elastica_field elastica_field;
typedef struct elastica_problem elastica_problem;
typedef struct elastica_result elastica_result;

ELASTICA_API const char* elastica_version(void);
ELASTICA_API const char* elastica_status_name(elastica_status status);
ELASTICA_API const char* elastica_solve_status_name(elastica_solve_status status);
/* Message of the last failed call on this thread; empty when none. */
ELASTICA_API const char* elastica_last_error(void);
/* Caps the per-target worker threads (values below 1 mean 1). */
ELASTICA_API void elastica_set_max_threads(int n);

/* ---- fields on the uniform grid s_j = j / n_cells ---- */

ELASTICA_API elastica_status elastica_field_create(int n_cells, const double* values, size_t count,
                                                   elastica_field** out);
/* name: "zero", "parabolic" (uses param a) or "quarter-turn". */
ELASTICA_API elastica_status elastica_field_preset(int n_cells, const char* name, double param, elastica_field** out);
ELASTICA_API elastica_status elastica_field_read_csv(const char* path, elastica_field** out);
ELASTICA_API elastica_status elastica_field_write_csv(const elastica_field* field, const char* path);
ELASTICA_API void elastica_field_destroy(elastica_field* field);
ELASTICA_API size_t elastica_field_size(const elastica_field* field);
ELASTICA_API int elastica_field_cells(const elastica_field* field);
ELASTICA_API elastica_status elastica_field_values(const elastica_field* field, double* out, size_t count);

/* ---- state equation ---- */

/* initial may be NULL. */
ELASTICA_API elastica_status elastica_solve_state(double hx, double hy, const elastica_field* alpha,
                                                  const elastica_field* initial, elastica_field** theta);
ELASTICA_API elastica_status elastica_state_residual(const elastica_field* theta, const elastica_field* alpha,
                                                     double hx, double hy, double* out);
ELASTICA_API elastica_status elastica_energy(const elastica_field* theta, const elastica_field* alpha, double hx,
                                             double hy, double* out);
ELASTICA_API elastica_status elastica_write_curve_csv(const elastica_field* theta, double ell, const char* path);
ELASTICA_API elastica_status elastica_renormalize(double M0, double ell, double S, double Hx, double Hy, double* hx,
                                                  double* hy);
ELASTICA_API elastica_status elastica_poincare_constant(int n_cells, double* out);

/* ---- shape programming ---- */

typedef struct elastica_problem_params {
  double epsilon;
  double gamma;
  double cap;
  double inner_tol;
  double outer_tol;
  int inner_max;
  int outer_max;
} elastica_problem_params;

ELASTICA_API void elastica_problem_params_default(elastica_problem_params* params);
ELASTICA_API elastica_status elastica_problem_create(const elastica_problem_params* params, elastica_problem** out);
ELASTICA_API elastica_status elastica_problem_add_target(elastica_problem* problem, const elastica_field* target);
ELASTICA_API void elastica_problem_destroy(elastica_problem* problem);

/* Nested fixed-point scheme. Returns ELASTICA_OK whenever a result was
 * produced; the optimization outcome is in the report. */
ELASTICA_API elastica_status elastica_program(const elastica_problem* problem, elastica_result** out);
ELASTICA_API elastica_status elastica_direct_minimize(const elastica_problem* problem, double gradient_tol,
                                                      int max_iterations, elastica_result** out);
ELASTICA_API void elastica_result_destroy(elastica_result* result);

typedef struct elastica_bound {
  int pass;
  double lhs;
  double rhs;
} elastica_bound;

typedef struct elastica_report {
  elastica_solve_status status;
  int inner_iterations;
  int outer_iterations;
  double inner_contraction;
  double outer_contraction;
  int cap_exceeded;
  int contraction_lost;
  double residual_state;
  double residual_adjoint;
  double residual_design;
  double residual_control;
  double cost;
  double gradient_norm;
  elastica_bound minimizer_bound;
  elastica_bound state_bound;
  elastica_bound cap_membership;
} elastica_report;

ELASTICA_API elastica_status elastica_result_report(const elastica_result* result, elastica_report* out);
ELASTICA_API const char* elastica_result_message(const elastica_result* result);
ELASTICA_API size_t elastica_result_target_count(const elastica_result* result);
ELASTICA_API elastica_status elastica_result_control(const elastica_result* result, size_t i, double* hx, double* hy);
ELASTICA_API elastica_status elastica_result_alpha(const elastica_result* result, elastica_field** out);
ELASTICA_API elastica_status elastica_result_theta(const elastica_result* result, size_t i, elastica_field** out);
ELASTICA_API elastica_status elastica_result_lambda(const elastica_result* result, size_t i, elastica_field** out);
/* Ratio sequences. Writes up to capacity entries and the full length to *count. */
ELASTICA_API size_t elastica_result_inner_loop_count(const elastica_result* result);
ELASTICA_API elastica_status elastica_result_inner_ratios(const elastica_result* result, size_t loop, double* out,
                                                          size_t capacity, size_t* count);
ELASTICA_API elastica_status elastica_result_outer_ratios(const elastica_result* result, double* out,
                                                          size_t capacity, size_t* count);

/* ---- analysis ---- */

ELASTICA_API elastica_status elastica_max_target_curvature(const elastica_field* target, double* out);
ELASTICA_API elastica_status elastica_attainable_design(const elastica_field* target, double H, double* hx, double* hy,
                                                        elastica_field** alpha);
ELASTICA_API elastica_status elastica_elliptic_K(double k, double* out);
ELASTICA_API elastica_status elastica_bifurcation_tip(double H, double* theta1);
ELASTICA_API elastica_status elastica_bifurcation_profile(double H, int n_cells, double* theta1,
                                                          elastica_field** profile);

#define ELASTICA_MAX_EIGENVALUES 16

typedef struct elastica_regularity {
  double eigenvalues[ELASTICA_MAX_EIGENVALUES];
  int count;
  double dist_to_one;
  double tolerance;
  int resonant;
  int sufficient_condition;
} elastica_regularity;

ELASTICA_API elastica_status elastica_regularity_check(double hx, double hy, const elastica_field* alpha,
                                                       const elastica_field* theta, int k, elastica_regularity* out);

typedef struct elastica_sweep_row {
  double epsilon;
  double cost;
  double attainment_error;
  elastica_solve_status status;
  int contraction_lost;
  double inner_contraction;
} elastica_sweep_row;

/* base may be NULL; epsilon and gamma of base are overridden per row. */
ELASTICA_API elastica_status elastica_epsilon_sweep(const elastica_field* target, const double* epsilons, size_t count,
                                                    const elastica_problem_params* base, elastica_sweep_row* rows);

#ifdef __cplusplus
}
#endif

#endif
