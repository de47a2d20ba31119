// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "elastica/mesh_field.hpp"

namespace elastica {

// All boundary-value problems here share the form
//
//   -v'' + f(s, v) = 0 on (0,1),   v(0) = 0,   v'(1) = 0,
//
// discretized by second-order central differences on nodes 1..N with a ghost
// node v_{N+1} = v_{N-1} closing the Neumann condition. Multiplying row j by
// the trapezoid weight gives a symmetric stiffness-plus-mass system, so the
// linearized operator is self-adjoint and its discrete adjoint is the same
// stencil.

struct SourceValue {
  double value;  ///< f(s_j, v)
  double dv;     ///< df/dv(s_j, v)
};

/// f(s, v) evaluated at a node index (sources usually depend on nodal data).
struct PointwiseSource {
  std::function<SourceValue(std::size_t node, double v)> eval;
  double lipschitz = 0.0;
};

struct SolveOptions {
  double tol_residual = 1e-10;
  int max_newton = 50;
  double damping = 0.5;
  int max_halvings = 30;
  bool picard_fallback = true;
  int max_picard = 2000;

  void validate() const;
};

struct SolveStats {
  int newton_iterations = 0;
  int picard_iterations = 0;
  double residual = 0.0;
};

/// Discrete residual of (general): sup over interior rows of |-v'' + f| plus
/// |v(0)| plus |v'(1)|, where v'(1) is the second-order ghost-consistent
/// one-sided slope (v_N - v_{N-1})/ds + (ds/2) f(1, v_N).
double bvp_residual(const PointwiseSource& src, const ScalarField& v);

/// Damped Newton with residual-monotone backtracking; Picard fallback
/// v <- double_integral_representation(-f(., v)) on stall.
ScalarField solve_nonlinear_bvp(const PointwiseSource& src, const SolveOptions& opts,
                                const ScalarField& initial, SolveStats* stats = nullptr);

/// Solves -u'' + q u = rhs, u(0) = u'(1) = 0. Throws SingularOperator when the
/// smallest eigenvalue magnitude of the discrete operator is below 10 ds^2.
ScalarField solve_linear_bvp(const ScalarField& q, const ScalarField& rhs);

/// v(s) = int_0^s int_{s'}^1 g, i.e. -v'' = g, v(0) = v'(1) = 0, as two nested
/// cumulative sums: a tail sum of cell fluxes (half weight at s = 1) and a
/// prefix sum of those fluxes. The sums are the exact inverse of the
/// finite-difference operator above with q = 0.
ScalarField double_integral_representation(const ScalarField& g);

struct SLSpectrum {
  std::vector<double> eigenvalues;  ///< ascending
  double dist_to_one = 0.0;         ///< min_k |mu_k - 1|
};

/// First k eigenvalues of -u'' + q u = mu w u, u(0) = u'(1) = 0.
SLSpectrum sl_eigen(const ScalarField& q, const ScalarField& w, int k);

/// Smallest eigenvalue of -u'' = mu u with mixed clamp/free conditions;
/// converges to pi^2/4 = c_p^{-2}.
double poincare_constant_check(const Grid& grid);

}  // namespace elastica
