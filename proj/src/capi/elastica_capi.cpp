// SPDX-License-Identifier: Apache-2.0
#include "elastica/elastica.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "elastica/analysis.hpp"
#include "elastica/errors.hpp"
#include "elastica/parallel.hpp"

struct elastica_field {
  elastica::ScalarField field;
};

struct elastica_problem {
  elastica::ProblemSpec spec;
};

struct elastica_result {
  elastica::DesignState state;
  elastica::SolveReport report;
};

namespace {

using namespace elastica;

thread_local std::string last_error;

elastica_status map_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return ELASTICA_INVALID_ARGUMENT;
    case ErrorCode::grid_too_coarse: return ELASTICA_GRID_TOO_COARSE;
    case ErrorCode::non_finite_value: return ELASTICA_NON_FINITE_VALUE;
    case ErrorCode::non_convergence: return ELASTICA_NON_CONVERGENCE;
    case ErrorCode::singular_operator: return ELASTICA_SINGULAR_OPERATOR;
    case ErrorCode::invalid_weight: return ELASTICA_INVALID_WEIGHT;
    case ErrorCode::h_too_small: return ELASTICA_H_TOO_SMALL;
    case ErrorCode::boundary_mismatch: return ELASTICA_BOUNDARY_MISMATCH;
    case ErrorCode::no_nontrivial_branch: return ELASTICA_NO_NONTRIVIAL_BRANCH;
    case ErrorCode::max_iterations: return ELASTICA_MAX_ITERATIONS;
    case ErrorCode::resonant: return ELASTICA_RESONANT;
    case ErrorCode::line_search_failure: return ELASTICA_LINE_SEARCH_FAILURE;
    case ErrorCode::io_failure: return ELASTICA_IO_FAILURE;
  }
  return ELASTICA_INTERNAL_ERROR;
}

elastica_solve_status map_solve(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return ELASTICA_SOLVE_CONVERGED;
    case SolveStatus::max_iter: return ELASTICA_SOLVE_MAX_ITER;
    case SolveStatus::resonant: return ELASTICA_SOLVE_RESONANT;
    case SolveStatus::diverged: return ELASTICA_SOLVE_DIVERGED;
  }
  return ELASTICA_SOLVE_DIVERGED;
}

template <typename Fn>
elastica_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return ELASTICA_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return ELASTICA_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ELASTICA_INTERNAL_ERROR;
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw Error(ErrorCode::invalid_argument, what);
}

elastica_field* wrap(ScalarField f) { return new elastica_field{std::move(f)}; }

ProblemSpec spec_from(const elastica_problem_params& p) {
  ProblemSpec s;
  s.epsilon = p.epsilon;
  s.gamma = p.gamma;
  s.cap = p.cap;
  s.inner_tol = p.inner_tol;
  s.outer_tol = p.outer_tol;
  s.inner_max = p.inner_max;
  s.outer_max = p.outer_max;
  return s;
}

void copy_ratios(const std::vector<double>& ratios, double* out, std::size_t capacity, std::size_t* count) {
  require(count != nullptr, "count must not be NULL");
  require(out != nullptr || capacity == 0, "out must not be NULL when capacity > 0");
  *count = ratios.size();
  std::copy_n(ratios.begin(), std::min(capacity, ratios.size()), out);
}

elastica_bound map_bound(const BoundCheck& b) { return {b.pass ? 1 : 0, b.lhs, b.rhs}; }

}  // namespace

extern "C" {

const char* elastica_version(void) { return ELASTICA_VERSION; }

const char* elastica_status_name(elastica_status status) {
  switch (status) {
    case ELASTICA_OK: return "Ok";
    case ELASTICA_INVALID_ARGUMENT: return "InvalidArgument";
    case ELASTICA_GRID_TOO_COARSE: return "GridTooCoarse";
    case ELASTICA_NON_FINITE_VALUE: return "NonFiniteValue";
    case ELASTICA_NON_CONVERGENCE: return "NonConvergence";
    case ELASTICA_SINGULAR_OPERATOR: return "SingularOperator";
    case ELASTICA_INVALID_WEIGHT: return "InvalidWeight";
    case ELASTICA_H_TOO_SMALL: return "HTooSmall";
    case ELASTICA_BOUNDARY_MISMATCH: return "BoundaryMismatch";
    case ELASTICA_NO_NONTRIVIAL_BRANCH: return "NoNontrivialBranch";
    case ELASTICA_MAX_ITERATIONS: return "MaxIterations";
    case ELASTICA_RESONANT: return "Resonant";
    case ELASTICA_LINE_SEARCH_FAILURE: return "LineSearchFailure";
    case ELASTICA_IO_FAILURE: return "IoFailure";
    case ELASTICA_INTERNAL_ERROR: return "InternalError";
  }
  return "Unknown";
}

const char* elastica_solve_status_name(elastica_solve_status status) {
  switch (status) {
    case ELASTICA_SOLVE_CONVERGED: return "converged";
    case ELASTICA_SOLVE_MAX_ITER: return "max_iter";
    case ELASTICA_SOLVE_RESONANT: return "resonant";
    case ELASTICA_SOLVE_DIVERGED: return "diverged";
  }
  return "unknown";
}

const char* elastica_last_error(void) { return last_error.c_str(); }

void elastica_set_max_threads(int n) { set_max_threads(n); }

elastica_status elastica_field_create(int n_cells, const double* values, size_t count, elastica_field** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    require(values != nullptr, "values must not be NULL");
    *out = wrap(ScalarField(Grid(n_cells), std::vector<double>(values, values + count)));
  });
}

elastica_status elastica_field_preset(int n_cells, const char* name, double param, elastica_field** out) {
  return guarded([&] {
    require(out != nullptr && name != nullptr, "name and out must not be NULL");
    const Grid grid(n_cells);
    const std::string n(name);
    if (n == "zero") {
      *out = wrap(preset_zero(grid));
    } else if (n == "parabolic") {
      *out = wrap(preset_parabolic(grid, param));
    } else if (n == "quarter-turn") {
      *out = wrap(preset_quarter_turn(grid));
    } else {
      throw Error(ErrorCode::invalid_argument, "unknown preset '" + n + "' (zero, parabolic, quarter-turn)");
    }
  });
}

elastica_status elastica_field_read_csv(const char* path, elastica_field** out) {
  return guarded([&] {
    require(out != nullptr && path != nullptr, "path and out must not be NULL");
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_failure, std::string("cannot open ") + path);
    *out = wrap(read_csv(in));
  });
}

elastica_status elastica_field_write_csv(const elastica_field* field, const char* path) {
  return guarded([&] {
    require(field != nullptr && path != nullptr, "field and path must not be NULL");
    std::ofstream o(path);
    if (!o) throw Error(ErrorCode::io_failure, std::string("cannot write ") + path);
    write_csv(o, field->field);
    if (!o) throw Error(ErrorCode::io_failure, std::string("write failed: ") + path);
  });
}

void elastica_field_destroy(elastica_field* field) { delete field; }

size_t elastica_field_size(const elastica_field* field) { return field ? field->field.size() : 0; }

int elastica_field_cells(const elastica_field* field) { return field ? field->field.grid().n_cells() : 0; }

elastica_status elastica_field_values(const elastica_field* field, double* out, size_t count) {
  return guarded([&] {
    require(field != nullptr && out != nullptr, "field and out must not be NULL");
    require(count >= field->field.size(), "output buffer smaller than the field");
    std::copy(field->field.values().begin(), field->field.values().end(), out);
  });
}

elastica_status elastica_solve_state(double hx, double hy, const elastica_field* alpha, const elastica_field* initial,
                                     elastica_field** theta) {
  return guarded([&] {
    require(alpha != nullptr && theta != nullptr, "alpha and theta must not be NULL");
    std::optional<ScalarField> guess;
    if (initial != nullptr) guess = initial->field;
    *theta = wrap(solve_state(Control(hx, hy), alpha->field.with_role(FieldRole::design), {}, guess));
  });
}

elastica_status elastica_state_residual(const elastica_field* theta, const elastica_field* alpha, double hx, double hy,
                                        double* out) {
  return guarded([&] {
    require(theta != nullptr && alpha != nullptr && out != nullptr, "arguments must not be NULL");
    *out = state_residual(theta->field, alpha->field, Control(hx, hy));
  });
}

elastica_status elastica_energy(const elastica_field* theta, const elastica_field* alpha, double hx, double hy,
                                double* out) {
  return guarded([&] {
    require(theta != nullptr && alpha != nullptr && out != nullptr, "arguments must not be NULL");
    *out = energy(theta->field, alpha->field, Control(hx, hy));
  });
}

elastica_status elastica_write_curve_csv(const elastica_field* theta, double ell, const char* path) {
  return guarded([&] {
    require(theta != nullptr && path != nullptr, "theta and path must not be NULL");
    std::ofstream o(path);
    if (!o) throw Error(ErrorCode::io_failure, std::string("cannot write ") + path);
    write_curve_csv(o, theta->field, ell);
    if (!o) throw Error(ErrorCode::io_failure, std::string("write failed: ") + path);
  });
}

elastica_status elastica_renormalize(double M0, double ell, double S, double Hx, double Hy, double* hx, double* hy) {
  return guarded([&] {
    require(hx != nullptr && hy != nullptr, "outputs must not be NULL");
    PhysicalScaling p;
    p.M0 = M0;
    p.ell = ell;
    p.S = S;
    p.H_phys = {Hx, Hy};
    const Control c = renormalize(p);
    *hx = c.hx();
    *hy = c.hy();
  });
}

elastica_status elastica_poincare_constant(int n_cells, double* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = poincare_constant_check(Grid(n_cells));
  });
}

void elastica_problem_params_default(elastica_problem_params* params) {
  if (params == nullptr) return;
  const ProblemSpec d;
  params->epsilon = d.epsilon;
  params->gamma = d.gamma;
  params->cap = d.cap;
  params->inner_tol = d.inner_tol;
  params->outer_tol = d.outer_tol;
  params->inner_max = d.inner_max;
  params->outer_max = d.outer_max;
}

elastica_status elastica_problem_create(const elastica_problem_params* params, elastica_problem** out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    elastica_problem_params p;
    elastica_problem_params_default(&p);
    if (params != nullptr) p = *params;
    ProblemSpec probe = spec_from(p);
    probe.targets = {ScalarField::zeros(Grid(2), FieldRole::target)};
    probe.validate();
    *out = new elastica_problem{spec_from(p)};
  });
}

elastica_status elastica_problem_add_target(elastica_problem* problem, const elastica_field* target) {
  return guarded([&] {
    require(problem != nullptr && target != nullptr, "problem and target must not be NULL");
    if (!problem->spec.targets.empty()) require_same_grid(problem->spec.targets.front(), target->field, "add_target");
    problem->spec.targets.push_back(target->field.with_role(FieldRole::target));
  });
}

void elastica_problem_destroy(elastica_problem* problem) { delete problem; }

elastica_status elastica_program(const elastica_problem* problem, elastica_result** out) {
  return guarded([&] {
    require(problem != nullptr && out != nullptr, "problem and out must not be NULL");
    auto [state, report] = outer_loop(problem->spec);
    *out = new elastica_result{std::move(state), std::move(report)};
  });
}

elastica_status elastica_direct_minimize(const elastica_problem* problem, double gradient_tol, int max_iterations,
                                         elastica_result** out) {
  return guarded([&] {
    require(problem != nullptr && out != nullptr, "problem and out must not be NULL");
    problem->spec.validate();
    DirectOptions opts;
    if (gradient_tol > 0.0) opts.gradient_tol = gradient_tol;
    if (max_iterations > 0) opts.max_iterations = max_iterations;
    auto [state, report] = direct_minimize(problem->spec, DesignState::zero(problem->spec), opts);
    *out = new elastica_result{std::move(state), std::move(report)};
  });
}

void elastica_result_destroy(elastica_result* result) { delete result; }

elastica_status elastica_result_report(const elastica_result* result, elastica_report* out) {
  return guarded([&] {
    require(result != nullptr && out != nullptr, "result and out must not be NULL");
    const SolveReport& r = result->report;
    out->status = map_solve(r.status);
    out->inner_iterations = r.inner_iterations;
    out->outer_iterations = r.outer_iterations;
    out->inner_contraction = r.inner_contraction;
    out->outer_contraction = r.outer_contraction;
    out->cap_exceeded = r.cap_exceeded ? 1 : 0;
    out->contraction_lost = r.contraction_lost ? 1 : 0;
    out->residual_state = r.residuals.state;
    out->residual_adjoint = r.residuals.adjoint;
    out->residual_design = r.residuals.design;
    out->residual_control = r.residuals.control;
    out->cost = r.cost;
    out->gradient_norm = r.gradient_norm;
    out->minimizer_bound = map_bound(r.audit.minimizer_bound);
    out->state_bound = map_bound(r.audit.state_bound);
    out->cap_membership = map_bound(r.audit.cap_membership);
  });
}

const char* elastica_result_message(const elastica_result* result) {
  return result ? result->report.message.c_str() : "";
}

size_t elastica_result_target_count(const elastica_result* result) {
  return result ? result->state.controls.size() : 0;
}

elastica_status elastica_result_control(const elastica_result* result, size_t i, double* hx, double* hy) {
  return guarded([&] {
    require(result != nullptr && hx != nullptr && hy != nullptr, "arguments must not be NULL");
    require(i < result->state.controls.size(), "target index out of range");
    *hx = result->state.controls[i].hx();
    *hy = result->state.controls[i].hy();
  });
}

elastica_status elastica_result_alpha(const elastica_result* result, elastica_field** out) {
  return guarded([&] {
    require(result != nullptr && out != nullptr, "result and out must not be NULL");
    *out = wrap(result->state.alpha);
  });
}

elastica_status elastica_result_theta(const elastica_result* result, size_t i, elastica_field** out) {
  return guarded([&] {
    require(result != nullptr && out != nullptr, "result and out must not be NULL");
    require(i < result->state.thetas.size(), "target index out of range");
    *out = wrap(result->state.thetas[i]);
  });
}

elastica_status elastica_result_lambda(const elastica_result* result, size_t i, elastica_field** out) {
  return guarded([&] {
    require(result != nullptr && out != nullptr, "result and out must not be NULL");
    require(i < result->state.lambdas.size(), "target index out of range");
    *out = wrap(result->state.lambdas[i]);
  });
}

size_t elastica_result_inner_loop_count(const elastica_result* result) {
  return result ? result->report.inner_traces.size() : 0;
}

elastica_status elastica_result_inner_ratios(const elastica_result* result, size_t loop, double* out, size_t capacity,
                                             size_t* count) {
  return guarded([&] {
    require(result != nullptr, "result must not be NULL");
    require(loop < result->report.inner_traces.size(), "inner loop index out of range");
    copy_ratios(result->report.inner_traces[loop].ratios, out, capacity, count);
  });
}

elastica_status elastica_result_outer_ratios(const elastica_result* result, double* out, size_t capacity,
                                             size_t* count) {
  return guarded([&] {
    require(result != nullptr, "result must not be NULL");
    copy_ratios(result->report.outer_trace.ratios, out, capacity, count);
  });
}

elastica_status elastica_max_target_curvature(const elastica_field* target, double* out) {
  return guarded([&] {
    require(target != nullptr && out != nullptr, "target and out must not be NULL");
    *out = max_target_curvature(target->field);
  });
}

elastica_status elastica_attainable_design(const elastica_field* target, double H, double* hx, double* hy,
                                           elastica_field** alpha) {
  return guarded([&] {
    require(target != nullptr && hx != nullptr && hy != nullptr && alpha != nullptr, "arguments must not be NULL");
    AttainableDesign d = attainable_design(target->field, H);
    *hx = d.control.hx();
    *hy = d.control.hy();
    *alpha = wrap(std::move(d.alpha));
  });
}

elastica_status elastica_elliptic_K(double k, double* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be NULL");
    *out = complete_elliptic_K(k);
  });
}

elastica_status elastica_bifurcation_tip(double H, double* theta1) {
  return guarded([&] {
    require(theta1 != nullptr, "theta1 must not be NULL");
    *theta1 = bifurcation_tip(H);
  });
}

elastica_status elastica_bifurcation_profile(double H, int n_cells, double* theta1, elastica_field** profile) {
  return guarded([&] {
    require(theta1 != nullptr && profile != nullptr, "outputs must not be NULL");
    BranchPoint p = bifurcation_profile(H, Grid(n_cells));
    *theta1 = p.theta1;
    *profile = wrap(std::move(p.profile));
  });
}

elastica_status elastica_regularity_check(double hx, double hy, const elastica_field* alpha,
                                          const elastica_field* theta, int k, elastica_regularity* out) {
  return guarded([&] {
    require(alpha != nullptr && theta != nullptr && out != nullptr, "arguments must not be NULL");
    require(k >= 1 && k <= ELASTICA_MAX_EIGENVALUES, "k must lie in [1, ELASTICA_MAX_EIGENVALUES]");
    const RegularityReport r = regularity_check(Control(hx, hy), alpha->field, theta->field, k);
    out->count = static_cast<int>(r.spectrum.eigenvalues.size());
    std::fill(std::begin(out->eigenvalues), std::end(out->eigenvalues), 0.0);
    std::copy(r.spectrum.eigenvalues.begin(), r.spectrum.eigenvalues.end(), out->eigenvalues);
    out->dist_to_one = r.spectrum.dist_to_one;
    out->tolerance = r.tolerance;
    out->resonant = r.verdict == Verdict::resonant ? 1 : 0;
    out->sufficient_condition = r.sufficient_condition ? 1 : 0;
  });
}

elastica_status elastica_epsilon_sweep(const elastica_field* target, const double* epsilons, size_t count,
                                       const elastica_problem_params* base, elastica_sweep_row* rows) {
  return guarded([&] {
    require(target != nullptr && epsilons != nullptr && rows != nullptr, "arguments must not be NULL");
    elastica_problem_params p;
    elastica_problem_params_default(&p);
    if (base != nullptr) p = *base;
    const std::vector<SweepRow> out =
        epsilon_sweep(target->field, std::vector<double>(epsilons, epsilons + count), spec_from(p));
    for (std::size_t i = 0; i < out.size(); ++i) {
      rows[i] = {out[i].epsilon,          out[i].cost, out[i].attainment_error, map_solve(out[i].status),
                 out[i].contraction_lost ? 1 : 0, out[i].inner_contraction};
    }
  });
}

}  // extern "C"
