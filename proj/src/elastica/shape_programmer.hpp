// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "elastica/magnetoelastica.hpp"

namespace elastica {

struct ProblemSpec {
  std::vector<ScalarField> targets;
  double epsilon = 1.0;
  double gamma = 1.0;
  double cap = 0.99 * uniqueness_threshold;  ///< K of the admissible control set D
  double inner_tol = 1e-9;
  double outer_tol = 1e-8;
  int inner_max = 200;
  int outer_max = 500;
  SolveOptions state_options;

  void validate() const;
  [[nodiscard]] const Grid& grid() const { return targets.front().grid(); }
  [[nodiscard]] std::size_t size() const noexcept { return targets.size(); }
  /// sqrt(sum_i int target_i^2).
  [[nodiscard]] double theta_bar_norm() const;
};

/// The quadruplet (h, alpha, theta, lambda).
struct DesignState {
  ControlSet controls;
  ScalarField alpha;
  std::vector<ScalarField> thetas;
  std::vector<ScalarField> lambdas;

  static DesignState zero(const ProblemSpec& spec);
};

enum class SolveStatus { converged, max_iter, resonant, diverged };

const char* to_string(SolveStatus s) noexcept;

/// Increments of one fixed-point loop and the ratios of consecutive increments.
struct LoopTrace {
  std::vector<double> increments;
  std::vector<double> ratios;

  void push(double increment);
  /// Last ratio whose denominator is at least 100 tol (NaN if none).
  [[nodiscard]] double asymptotic_ratio(double tol) const;
  /// Largest such ratio (NaN if none).
  [[nodiscard]] double max_ratio(double tol) const;
};

/// Sup-norm residuals of the four equations of the Lagrangian system.
struct EquationResiduals {
  double state = 0.0;
  double adjoint = 0.0;
  double design = 0.0;
  double control = 0.0;

  [[nodiscard]] double max() const;
};

struct BoundCheck {
  bool pass = true;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  ///< rhs - lhs
};

struct BoundsAudit {
  BoundCheck minimizer_bound;  ///< max|h_i|^2 <= Theta^2 / gamma
  BoundCheck state_bound;      ///< ||theta_i||_inf <= |h_i|
  BoundCheck cap_membership;   ///< max|h_i| <= K

  [[nodiscard]] bool all_pass() const {
    return minimizer_bound.pass && state_bound.pass && cap_membership.pass;
  }
};

struct SolveReport {
  SolveStatus status = SolveStatus::converged;
  std::string message;
  int inner_iterations = 0;
  int outer_iterations = 0;
  std::vector<LoopTrace> inner_traces;  ///< one per inner loop run
  LoopTrace outer_trace;
  double inner_contraction = 0.0;  ///< max over inner loops of the asymptotic ratio
  double outer_contraction = 0.0;
  bool cap_exceeded = false;       ///< some iterate left D (not projected)
  bool contraction_lost = false;
  EquationResiduals residuals;
  double cost = 0.0;
  BoundsAudit audit;
  // direct minimizer only
  double gradient_norm = 0.0;
  std::vector<double> cost_history;
};

double cost(const ProblemSpec& spec, const ControlSet& controls, const ScalarField& alpha,
            const std::vector<ScalarField>& thetas);

/// sum_i int | -target_i'' - h_i . Dm(alpha + target_i) |^2.
double residual_cost(const ControlSet& controls, const ScalarField& alpha, const std::vector<ScalarField>& targets);

/// (1/2) sum_i int | target_i - Theta_alpha(h_i) |^2.
double attainment_error(const ControlSet& controls, const ScalarField& alpha,
                        const std::vector<ScalarField>& targets, const SolveOptions& opts = {});

struct InnerResult {
  ControlSet controls;
  std::vector<ScalarField> thetas;
  std::vector<ScalarField> lambdas;
  SolveReport report;
};

/// Fixed point of h -> theta -> lambda -> T(h) at frozen design. Iterates
/// are monitored for membership in D but never projected.
InnerResult inner_loop(const ScalarField& alpha, const ProblemSpec& spec, const ControlSet& h_init,
                       const std::vector<ScalarField>* warm_thetas = nullptr);

/// Nested scheme: inner loop, then alpha <- A(alpha) until ||delta alpha||_inf <= outer_tol.
std::pair<DesignState, SolveReport> outer_loop(const ProblemSpec& spec,
                                               const std::optional<ScalarField>& alpha_init = std::nullopt,
                                               const std::optional<ControlSet>& h_init = std::nullopt);

EquationResiduals stationarity_residuals(const ProblemSpec& spec, const DesignState& state);

struct ReducedGradient {
  std::vector<Vec2> controls;  ///< dC/dh_i = gamma h_i + int lambda_i Dm(alpha + theta_i)
  ScalarField alpha;           ///< H^1_{0L} Riesz representative of the alpha derivative
  double norm = 0.0;           ///< sqrt(sum |g_i|^2 + |alpha gradient|_{H^1}^2)
};

struct ReducedEvaluation {
  double cost = 0.0;
  std::vector<ScalarField> thetas;
  std::vector<ScalarField> lambdas;
  ReducedGradient gradient;
};

/// Cost of the reduced problem (states eliminated); optional warm starts.
double reduced_cost(const ProblemSpec& spec, const ControlSet& controls, const ScalarField& alpha,
                    const std::vector<ScalarField>* warm_thetas = nullptr);

/// Cost and adjoint gradient of the reduced problem. Throws SingularOperator on resonance.
ReducedEvaluation reduced_cost_gradient(const ProblemSpec& spec, const ControlSet& controls,
                                        const ScalarField& alpha,
                                        const std::vector<ScalarField>* warm_thetas = nullptr);

struct DirectOptions {
  double gradient_tol = 1e-6;
  int max_iterations = 20000;
  double armijo = 1e-4;
  int max_backtracks = 60;
};

/// Gradient descent with Barzilai-Borwein trial steps and Armijo backtracking
/// on the reduced cost, in the metric |k|^2 + int (beta')^2.
std::pair<DesignState, SolveReport> direct_minimize(const ProblemSpec& spec, const DesignState& init,
                                                    const DirectOptions& opts = {});

BoundsAudit bounds_audit(const ProblemSpec& spec, const DesignState& state);

}  // namespace elastica
