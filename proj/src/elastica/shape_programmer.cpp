// SPDX-License-Identifier: Apache-2.0
#include "elastica/shape_programmer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "elastica/errors.hpp"
#include "elastica/parallel.hpp"

namespace elastica {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double divergence_threshold = 1e6;

double misfit_integral(const ScalarField& theta, const ScalarField& target) {
  std::vector<double> sq(theta.size());
  for (std::size_t j = 0; j < sq.size(); ++j) {
    const double d = theta[j] - target[j];
    sq[j] = d * d;
  }
  return integral(theta.grid(), sq);
}

double max_increment(const ControlSet& a, const ControlSet& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, (a[i].h() - b[i].h()).norm());
  return m;
}

std::vector<ScalarField> solve_states(const ProblemSpec& spec, const ControlSet& controls, const ScalarField& alpha,
                                      const std::vector<ScalarField>* warm) {
  std::vector<std::optional<ScalarField>> out(controls.size());
  parallel_for(controls.size(), [&](std::size_t i) {
    std::optional<ScalarField> guess;
    if (warm != nullptr && i < warm->size()) guess = (*warm)[i];
    out[i] = solve_state(controls[i], alpha, spec.state_options, guess);
  });
  std::vector<ScalarField> thetas;
  thetas.reserve(out.size());
  for (auto& t : out) thetas.push_back(std::move(*t));
  return thetas;
}

std::vector<ScalarField> solve_adjoints(const ProblemSpec& spec, const ControlSet& controls, const ScalarField& alpha,
                                        const std::vector<ScalarField>& thetas) {
  std::vector<std::optional<ScalarField>> out(controls.size());
  parallel_for(controls.size(), [&](std::size_t i) {
    out[i] = solve_adjoint(controls[i], alpha, thetas[i], spec.targets[i]);
  });
  std::vector<ScalarField> lambdas;
  lambdas.reserve(out.size());
  for (auto& l : out) lambdas.push_back(std::move(*l));
  return lambdas;
}

void finish_contraction(SolveReport& report, double inner_tol, double outer_tol) {
  report.inner_contraction = 0.0;
  bool any_inner = false;
  for (const LoopTrace& t : report.inner_traces) {
    const double r = t.asymptotic_ratio(inner_tol);
    if (std::isfinite(r)) {
      report.inner_contraction = std::max(report.inner_contraction, r);
      any_inner = true;
    }
  }
  if (!any_inner) report.inner_contraction = nan;
  report.outer_contraction = report.outer_trace.asymptotic_ratio(outer_tol);
  report.contraction_lost = (any_inner && report.inner_contraction >= 1.0) ||
                            (std::isfinite(report.outer_contraction) && report.outer_contraction >= 1.0) ||
                            report.status == SolveStatus::diverged || report.status == SolveStatus::max_iter;
}

}  // namespace

void ProblemSpec::validate() const {
  if (targets.empty()) throw Error(ErrorCode::invalid_argument, "ProblemSpec: at least one target required");
  for (const ScalarField& t : targets) require_same_grid(targets.front(), t, "ProblemSpec targets");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::invalid_argument, "ProblemSpec: epsilon must be > 0");
  if (!(gamma > 0.0)) throw Error(ErrorCode::invalid_argument, "ProblemSpec: gamma must be > 0");
  if (!(cap > 0.0 && cap < uniqueness_threshold)) {
    throw Error(ErrorCode::invalid_argument, "ProblemSpec: cap K must lie in (0, pi^2/4)");
  }
  if (!(inner_tol > 0.0) || !(outer_tol > 0.0)) throw Error(ErrorCode::invalid_argument, "ProblemSpec: tolerances must be > 0");
  if (inner_max < 1 || outer_max < 1) throw Error(ErrorCode::invalid_argument, "ProblemSpec: iteration limits must be >= 1");
  state_options.validate();
}

double ProblemSpec::theta_bar_norm() const {
  double s = 0.0;
  for (const ScalarField& t : targets) {
    const double n = l2_norm(t);
    s += n * n;
  }
  return std::sqrt(s);
}

DesignState DesignState::zero(const ProblemSpec& spec) {
  const Grid& g = spec.grid();
  DesignState s{ControlSet(spec.size()), ScalarField::zeros(g, FieldRole::design), {}, {}};
  for (std::size_t i = 0; i < spec.size(); ++i) {
    s.thetas.push_back(ScalarField::zeros(g, FieldRole::shape));
    s.lambdas.push_back(ScalarField::zeros(g, FieldRole::multiplier));
  }
  return s;
}

const char* to_string(SolveStatus s) noexcept {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::resonant: return "resonant";
    case SolveStatus::diverged: return "diverged";
  }
  return "diverged";
}

void LoopTrace::push(double increment) {
  if (!increments.empty()) {
    const double prev = increments.back();
    ratios.push_back(prev > 0.0 ? increment / prev : 0.0);
  }
  increments.push_back(increment);
}

double LoopTrace::asymptotic_ratio(double tol) const {
  double r = nan;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    if (increments[k] >= 100.0 * tol) r = ratios[k];
  }
  return r;
}

double LoopTrace::max_ratio(double tol) const {
  double r = nan;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    if (increments[k] >= 100.0 * tol) r = std::isfinite(r) ? std::max(r, ratios[k]) : ratios[k];
  }
  return r;
}

double EquationResiduals::max() const { return std::max({state, adjoint, design, control}); }

double cost(const ProblemSpec& spec, const ControlSet& controls, const ScalarField& alpha,
            const std::vector<ScalarField>& thetas) {
  if (thetas.size() != spec.size() || controls.size() != spec.size()) {
    throw Error(ErrorCode::invalid_argument, "cost: expected one state and one control per target");
  }
  double misfit = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    require_same_grid(thetas[i], spec.targets[i], "cost");
    misfit += misfit_integral(thetas[i], spec.targets[i]);
  }
  const double bend = h1_seminorm(alpha);
  double field = 0.0;
  for (const Control& c : controls) field += c.magnitude() * c.magnitude();
  return 0.5 * misfit + 0.5 * spec.epsilon * bend * bend + 0.5 * spec.gamma * field;
}

double residual_cost(const ControlSet& controls, const ScalarField& alpha, const std::vector<ScalarField>& targets) {
  if (controls.size() != targets.size()) throw Error(ErrorCode::invalid_argument, "residual_cost: count mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    require_same_grid(alpha, targets[i], "residual_cost");
    const ScalarField d2 = second_derivative_interior(targets[i]);
    std::vector<double> sq(alpha.size());
    for (std::size_t j = 0; j < sq.size(); ++j) {
      const double r = -d2[j] - controls[i].h().dot(m_derivative(alpha[j] + targets[i][j], 1));
      sq[j] = r * r;
    }
    total += integral(alpha.grid(), sq);
  }
  return total;
}

double attainment_error(const ControlSet& controls, const ScalarField& alpha, const std::vector<ScalarField>& targets,
                        const SolveOptions& opts) {
  if (controls.size() != targets.size()) throw Error(ErrorCode::invalid_argument, "attainment_error: count mismatch");
  std::vector<double> parts(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) {
    const ScalarField theta = solve_state(controls[i], alpha, opts);
    parts[i] = misfit_integral(theta, targets[i]);
  });
  double total = 0.0;
  for (double p : parts) total += p;
  return 0.5 * total;
}

InnerResult inner_loop(const ScalarField& alpha, const ProblemSpec& spec, const ControlSet& h_init,
                       const std::vector<ScalarField>* warm_thetas) {
  spec.validate();
  require_same_grid(alpha, spec.targets.front(), "inner_loop");
  if (h_init.size() != spec.size()) throw Error(ErrorCode::invalid_argument, "inner_loop: one initial control per target");

  InnerResult res{h_init, {}, {}, {}};
  LoopTrace trace;
  SolveReport& rep = res.report;
  rep.status = SolveStatus::max_iter;
  if (warm_thetas != nullptr) res.thetas = *warm_thetas;

  try {
    for (int it = 0; it < spec.inner_max; ++it) {
      res.thetas = solve_states(spec, res.controls, alpha, res.thetas.empty() ? nullptr : &res.thetas);
      res.lambdas = solve_adjoints(spec, res.controls, alpha, res.thetas);
      ControlSet next(spec.size());
      for (std::size_t i = 0; i < spec.size(); ++i) {
        next[i] = control_update(res.lambdas[i], alpha, res.thetas[i], spec.gamma);
      }
      const double inc = max_increment(next, res.controls);
      res.controls = std::move(next);
      trace.push(inc);
      ++rep.inner_iterations;
      if (max_magnitude(res.controls) > spec.cap) rep.cap_exceeded = true;
      if (!std::isfinite(inc) || inc > divergence_threshold) {
        rep.status = SolveStatus::diverged;
        rep.message = "inner loop increments blew up";
        break;
      }
      if (inc <= spec.inner_tol) {
        rep.status = SolveStatus::converged;
        break;
      }
    }
    if (rep.status == SolveStatus::converged) {
      // States and multipliers consistent with the returned controls.
      res.thetas = solve_states(spec, res.controls, alpha, &res.thetas);
      res.lambdas = solve_adjoints(spec, res.controls, alpha, res.thetas);
    } else if (rep.status == SolveStatus::max_iter) {
      rep.message = "inner loop reached inner_max";
    }
  } catch (const NonConvergence& e) {
    rep.status = SolveStatus::diverged;
    rep.message = std::string("state solve failed: ") + e.what();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::singular_operator) {
      rep.status = SolveStatus::resonant;
    } else if (e.code() == ErrorCode::non_finite_value) {
      rep.status = SolveStatus::diverged;
    } else {
      throw;
    }
    rep.message = e.what();
  }
  rep.inner_traces.push_back(std::move(trace));
  finish_contraction(rep, spec.inner_tol, spec.outer_tol);
  return res;
}

EquationResiduals stationarity_residuals(const ProblemSpec& spec, const DesignState& s) {
  EquationResiduals r;
  const Grid& grid = spec.grid();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    r.state = std::max(r.state, state_residual(s.thetas[i], s.alpha, s.controls[i]));
    r.adjoint = std::max(r.adjoint, adjoint_residual(s.lambdas[i], s.controls[i], s.alpha, s.thetas[i], spec.targets[i]));
    std::vector<double> gx(grid.node_count()), gy(grid.node_count());
    for (std::size_t j = 0; j < gx.size(); ++j) {
      const Vec2 d = m_derivative(s.alpha[j] + s.thetas[i][j], 1);
      gx[j] = s.lambdas[i][j] * d.x;
      gy[j] = s.lambdas[i][j] * d.y;
    }
    const Vec2 g = spec.gamma * s.controls[i].h() + Vec2{integral(grid, gx), integral(grid, gy)};
    r.control = std::max(r.control, g.norm());
  }
  // (P_alpha) written as -alpha'' + f(s, alpha) with f = (1/eps) sum lambda_i h_i.D^2m(alpha + theta_i),
  // reported in the eps-scaled form -eps alpha'' + sum(...).
  PointwiseSource src;
  src.eval = [&](std::size_t j, double v) {
    double f = 0.0;
    double df = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      f += s.lambdas[i][j] * s.controls[i].h().dot(m_derivative(v + s.thetas[i][j], 2));
      df += s.lambdas[i][j] * s.controls[i].h().dot(m_derivative(v + s.thetas[i][j], 3));
    }
    return SourceValue{f / spec.epsilon, df / spec.epsilon};
  };
  r.design = spec.epsilon * bvp_residual(src, s.alpha);
  return r;
}

std::pair<DesignState, SolveReport> outer_loop(const ProblemSpec& spec, const std::optional<ScalarField>& alpha_init,
                                               const std::optional<ControlSet>& h_init) {
  spec.validate();
  DesignState state = DesignState::zero(spec);
  if (alpha_init) {
    require_same_grid(*alpha_init, spec.targets.front(), "outer_loop");
    state.alpha = alpha_init->with_role(FieldRole::design);
  }
  if (h_init) {
    if (h_init->size() != spec.size()) throw Error(ErrorCode::invalid_argument, "outer_loop: one initial control per target");
    state.controls = *h_init;
  }

  SolveReport rep;
  rep.status = SolveStatus::max_iter;
  const std::vector<ScalarField>* warm = nullptr;
  auto absorb = [&](InnerResult& inner) {
    rep.inner_iterations += inner.report.inner_iterations;
    rep.cap_exceeded = rep.cap_exceeded || inner.report.cap_exceeded;
    for (auto& t : inner.report.inner_traces) rep.inner_traces.push_back(std::move(t));
  };

  for (int k = 0; k < spec.outer_max; ++k) {
    InnerResult inner = inner_loop(state.alpha, spec, state.controls, warm);
    absorb(inner);
    ++rep.outer_iterations;
    if (inner.report.status != SolveStatus::converged) {
      rep.status = inner.report.status;
      rep.message = "outer iteration " + std::to_string(k + 1) + ": " + inner.report.message;
      if (!inner.thetas.empty() && inner.thetas.size() == spec.size()) state.thetas = std::move(inner.thetas);
      if (!inner.lambdas.empty() && inner.lambdas.size() == spec.size()) state.lambdas = std::move(inner.lambdas);
      state.controls = std::move(inner.controls);
      break;
    }
    state.controls = std::move(inner.controls);
    state.thetas = std::move(inner.thetas);
    state.lambdas = std::move(inner.lambdas);
    warm = &state.thetas;

    ScalarField next = design_update(state.controls, state.lambdas, state.thetas, state.alpha, spec.epsilon);
    const double inc = sup_norm(next - state.alpha);
    state.alpha = std::move(next);
    rep.outer_trace.push(inc);
    if (!std::isfinite(inc) || inc > divergence_threshold) {
      rep.status = SolveStatus::diverged;
      rep.message = "design increments blew up";
      break;
    }
    if (inc <= spec.outer_tol) {
      InnerResult final_inner = inner_loop(state.alpha, spec, state.controls, warm);
      absorb(final_inner);
      if (final_inner.report.status != SolveStatus::converged) {
        rep.status = final_inner.report.status;
        rep.message = "final inner loop: " + final_inner.report.message;
        break;
      }
      state.controls = std::move(final_inner.controls);
      state.thetas = std::move(final_inner.thetas);
      state.lambdas = std::move(final_inner.lambdas);
      rep.status = SolveStatus::converged;
      break;
    }
  }
  if (rep.status == SolveStatus::max_iter && rep.message.empty()) rep.message = "outer loop reached outer_max";

  finish_contraction(rep, spec.inner_tol, spec.outer_tol);
  if (state.thetas.size() == spec.size() && state.lambdas.size() == spec.size()) {
    rep.residuals = stationarity_residuals(spec, state);
    rep.cost = cost(spec, state.controls, state.alpha, state.thetas);
  } else {
    rep.cost = nan;
  }
  rep.audit = bounds_audit(spec, state);
  return {std::move(state), std::move(rep)};
}

double reduced_cost(const ProblemSpec& spec, const ControlSet& controls, const ScalarField& alpha,
                    const std::vector<ScalarField>* warm_thetas) {
  const std::vector<ScalarField> thetas = solve_states(spec, controls, alpha, warm_thetas);
  return cost(spec, controls, alpha, thetas);
}

ReducedEvaluation reduced_cost_gradient(const ProblemSpec& spec, const ControlSet& controls, const ScalarField& alpha,
                                        const std::vector<ScalarField>* warm_thetas) {
  spec.validate();
  require_same_grid(alpha, spec.targets.front(), "reduced_cost_gradient");
  if (controls.size() != spec.size()) throw Error(ErrorCode::invalid_argument, "reduced_cost_gradient: count mismatch");

  std::vector<ScalarField> thetas = solve_states(spec, controls, alpha, warm_thetas);
  std::vector<ScalarField> lambdas = solve_adjoints(spec, controls, alpha, thetas);
  const double c = cost(spec, controls, alpha, thetas);

  const Grid& grid = spec.grid();
  double norm2 = 0.0;
  std::vector<Vec2> gh(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    std::vector<double> gx(grid.node_count()), gy(grid.node_count());
    for (std::size_t j = 0; j < gx.size(); ++j) {
      const Vec2 d = m_derivative(alpha[j] + thetas[i][j], 1);
      gx[j] = lambdas[i][j] * d.x;
      gy[j] = lambdas[i][j] * d.y;
    }
    gh[i] = spec.gamma * controls[i].h() + Vec2{integral(grid, gx), integral(grid, gy)};
    norm2 += gh[i].dot(gh[i]);
  }
  // Riesz representative G of beta -> eps int alpha' beta' + int rho beta:
  // -G'' = -eps alpha'' + rho, i.e. G = eps alpha + (double integral of rho).
  const ScalarField rho = design_source(controls, lambdas, thetas, alpha);
  ScalarField ga = (spec.epsilon * alpha + double_integral_representation(rho)).with_role(FieldRole::design);
  const double gn = h1_seminorm(ga);
  ReducedGradient grad{std::move(gh), std::move(ga), std::sqrt(norm2 + gn * gn)};
  return ReducedEvaluation{c, std::move(thetas), std::move(lambdas), std::move(grad)};
}

namespace {

double metric_dot(const std::vector<Vec2>& a, const ScalarField& A, const std::vector<Vec2>& b, const ScalarField& B) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  const double ds = A.grid().spacing();
  for (std::size_t j = 0; j + 1 < A.size(); ++j) s += (A[j + 1] - A[j]) * (B[j + 1] - B[j]) / ds;
  return s;
}

}  // namespace

std::pair<DesignState, SolveReport> direct_minimize(const ProblemSpec& spec, const DesignState& init,
                                                    const DirectOptions& opts) {
  spec.validate();
  SolveReport rep;
  rep.status = SolveStatus::max_iter;
  DesignState state = init;
  if (state.controls.size() != spec.size()) throw Error(ErrorCode::invalid_argument, "direct_minimize: count mismatch");

  auto evaluate = [&](const ControlSet& h, const ScalarField& a, const std::vector<ScalarField>* warm) {
    return reduced_cost_gradient(spec, h, a, warm);
  };

  try {
    ReducedEvaluation cur = evaluate(state.controls, state.alpha, nullptr);
    rep.cost_history.push_back(cur.cost);
    double step = 1.0;
    std::vector<Vec2> prev_gh;
    std::optional<ScalarField> prev_ga;
    std::vector<Vec2> s_h;
    std::optional<ScalarField> s_a;

    for (int it = 0; it < opts.max_iterations; ++it) {
      rep.gradient_norm = cur.gradient.norm;
      if (cur.gradient.norm <= opts.gradient_tol) {
        rep.status = SolveStatus::converged;
        break;
      }
      if (prev_ga && s_a) {
        std::vector<Vec2> y_h(spec.size());
        for (std::size_t i = 0; i < spec.size(); ++i) y_h[i] = cur.gradient.controls[i] - prev_gh[i];
        const ScalarField y_a = cur.gradient.alpha - *prev_ga;
        const double sy = metric_dot(s_h, *s_a, y_h, y_a);
        const double ss = metric_dot(s_h, *s_a, s_h, *s_a);
        if (sy > 0.0) step = std::clamp(ss / sy, 1e-10, 1e10);
      }

      const double g2 = cur.gradient.norm * cur.gradient.norm;
      bool accepted = false;
      for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
        ControlSet h_try(spec.size());
        for (std::size_t i = 0; i < spec.size(); ++i) {
          h_try[i] = Control(state.controls[i].h() - step * cur.gradient.controls[i]);
        }
        const ScalarField a_try = (state.alpha - step * cur.gradient.alpha).with_role(FieldRole::design);
        double c_try = std::numeric_limits<double>::infinity();
        std::optional<ReducedEvaluation> trial;
        try {
          trial = evaluate(h_try, a_try, &cur.thetas);
          c_try = trial->cost;
        } catch (const NonConvergence&) {
        } catch (const Error& e) {
          if (e.code() != ErrorCode::singular_operator) throw;
        }
        if (trial && c_try <= cur.cost - opts.armijo * step * g2) {
          s_h.assign(spec.size(), Vec2{});
          for (std::size_t i = 0; i < spec.size(); ++i) s_h[i] = h_try[i].h() - state.controls[i].h();
          s_a = a_try - state.alpha;
          prev_gh = cur.gradient.controls;
          prev_ga = cur.gradient.alpha;
          state.controls = std::move(h_try);
          state.alpha = a_try;
          cur = std::move(*trial);
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      ++rep.outer_iterations;
      if (!accepted) {
        rep.status = SolveStatus::diverged;
        rep.message = "line search failure";
        break;
      }
      rep.cost_history.push_back(cur.cost);
    }
    state.thetas = cur.thetas;
    state.lambdas = cur.lambdas;
    rep.cost = cur.cost;
    rep.gradient_norm = cur.gradient.norm;
  } catch (const Error& e) {
    rep.status = e.code() == ErrorCode::singular_operator ? SolveStatus::resonant : SolveStatus::diverged;
    rep.message = e.what();
  }
  if (rep.status == SolveStatus::max_iter && rep.message.empty()) rep.message = "direct minimizer reached max_iterations";
  if (state.thetas.size() == spec.size() && state.lambdas.size() == spec.size()) {
    rep.residuals = stationarity_residuals(spec, state);
  }
  rep.audit = bounds_audit(spec, state);
  return {std::move(state), std::move(rep)};
}

BoundsAudit bounds_audit(const ProblemSpec& spec, const DesignState& state) {
  BoundsAudit a;
  const double hmax = max_magnitude(state.controls);
  const double tb = spec.theta_bar_norm();

  a.minimizer_bound.lhs = hmax * hmax;
  a.minimizer_bound.rhs = tb * tb / spec.gamma;
  a.minimizer_bound.slack = a.minimizer_bound.rhs - a.minimizer_bound.lhs;
  a.minimizer_bound.pass = a.minimizer_bound.lhs <= a.minimizer_bound.rhs + 1e-8;

  // Reported as the worst case over targets of sup|theta_i| against |h_i|.
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.thetas.size() && i < state.controls.size(); ++i) {
    const double gap = state.controls[i].magnitude() - sup_norm(state.thetas[i]);
    if (gap < worst) {
      worst = gap;
      a.state_bound.lhs = sup_norm(state.thetas[i]);
      a.state_bound.rhs = state.controls[i].magnitude();
    }
  }
  if (!std::isfinite(worst)) worst = 0.0;
  a.state_bound.slack = worst;
  a.state_bound.pass = worst >= -1e-6;

  a.cap_membership.lhs = hmax;
  a.cap_membership.rhs = spec.cap;
  a.cap_membership.slack = spec.cap - hmax;
  a.cap_membership.pass = hmax <= spec.cap;
  return a;
}

}  // namespace elastica
