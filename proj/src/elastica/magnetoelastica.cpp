// SPDX-License-Identifier: Apache-2.0
#include "elastica/magnetoelastica.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <string>

#include "elastica/errors.hpp"

namespace elastica {

Vec2 rotate(Vec2 v, double c) noexcept {
  const double cs = std::cos(c);
  const double sn = std::sin(c);
  return {cs * v.x - sn * v.y, sn * v.x + cs * v.y};
}

Control::Control(double hx, double hy) : h_{hx, hy} {
  if (!std::isfinite(hx) || !std::isfinite(hy)) throw Error(ErrorCode::non_finite_value, "Control: non-finite field");
}

double aggregate_magnitude(const ControlSet& controls) {
  double s = 0.0;
  for (const Control& c : controls) s += c.magnitude();
  return s;
}

double max_magnitude(const ControlSet& controls) {
  double m = 0.0;
  for (const Control& c : controls) m = std::max(m, c.magnitude());
  return m;
}

Control renormalize(const PhysicalScaling& p) {
  if (!(p.M0 > 0.0) || !(p.ell > 0.0) || !(p.S > 0.0) || !(p.mu0 > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "renormalize: M0, ell, S and mu0 must be positive");
  }
  const double scale = p.mu0 * p.M0 * p.ell * p.ell / p.S;
  return Control(scale * p.H_phys.x, scale * p.H_phys.y);
}

Vec2 m_derivative(double v, int order) {
  if (order < 0) throw Error(ErrorCode::invalid_argument, "m_derivative: order must be >= 0");
  const double c = std::cos(v);
  const double s = std::sin(v);
  switch (order % 4) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

PointwiseSource state_source(const Control& h, const ScalarField& alpha) {
  const Vec2 hv = h.h();
  std::vector<double> a(alpha.values().begin(), alpha.values().end());
  PointwiseSource src;
  src.lipschitz = h.magnitude();
  src.eval = [hv, a = std::move(a)](std::size_t j, double v) {
    const double x = a[j] + v;
    const double c = std::cos(x);
    const double s = std::sin(x);
    // f = -h.Dm(x) = hx sin x - hy cos x ; df/dv = -h.D^2m(x) = hx cos x + hy sin x
    return SourceValue{hv.x * s - hv.y * c, hv.x * c + hv.y * s};
  };
  return src;
}

ScalarField solve_state(const Control& h, const ScalarField& alpha, const SolveOptions& opts,
                        const std::optional<ScalarField>& initial) {
  const Grid grid = alpha.grid();
  if (initial) {
    require_same_grid(alpha, *initial, "solve_state");
    return solve_nonlinear_bvp(state_source(h, alpha), opts, initial->with_role(FieldRole::generic))
        .with_role(FieldRole::shape);
  }
  ScalarField guess = ScalarField::zeros(grid);
  if (h.in_uniqueness_ball()) {
    return solve_nonlinear_bvp(state_source(h, alpha), opts, guess).with_role(FieldRole::shape);
  }
  // Quasi-static loading path from h = 0 selects the branch connected to the
  // straight configuration.
  const int steps = std::max(4, static_cast<int>(std::ceil(h.magnitude() / 0.25)));
  for (int k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) / steps;
    guess = solve_nonlinear_bvp(state_source(Control(t * h.hx(), t * h.hy()), alpha), opts, guess);
  }
  return guess.with_role(FieldRole::shape);
}

double energy(const ScalarField& theta, const ScalarField& alpha, const Control& h) {
  require_same_grid(theta, alpha, "energy");
  std::vector<double> potential(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    potential[j] = h.h().dot(m_derivative(theta[j] + alpha[j], 0));
  }
  const double bend = h1_seminorm(theta);
  return 0.5 * bend * bend - integral(theta.grid(), potential);
}

ScalarField solve_adjoint(const Control& h, const ScalarField& alpha, const ScalarField& theta,
                          const ScalarField& target) {
  require_same_grid(alpha, theta, "solve_adjoint");
  require_same_grid(theta, target, "solve_adjoint");
  const Grid grid = theta.grid();
  std::vector<double> q(theta.size()), rhs(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    q[j] = -h.h().dot(m_derivative(alpha[j] + theta[j], 2));
    rhs[j] = theta[j] - target[j];
  }
  try {
    return solve_linear_bvp(ScalarField(grid, std::move(q)), ScalarField(grid, std::move(rhs)))
        .with_role(FieldRole::multiplier);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::singular_operator) {
      throw Error(ErrorCode::singular_operator, std::string("solve_adjoint: resonant linearization; ") + e.what());
    }
    throw;
  }
}

Control control_update(const ScalarField& lambda, const ScalarField& alpha, const ScalarField& theta,
                       double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::invalid_argument, "control_update: gamma must be > 0");
  require_same_grid(lambda, alpha, "control_update");
  require_same_grid(lambda, theta, "control_update");
  std::vector<double> gx(lambda.size()), gy(lambda.size());
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    const Vec2 d = m_derivative(alpha[j] + theta[j], 1);
    gx[j] = lambda[j] * d.x;
    gy[j] = lambda[j] * d.y;
  }
  const Grid& grid = lambda.grid();
  return Control(-integral(grid, gx) / gamma, -integral(grid, gy) / gamma);
}

ScalarField design_source(const ControlSet& controls, const std::vector<ScalarField>& lambdas,
                          const std::vector<ScalarField>& thetas, const ScalarField& alpha) {
  if (controls.size() != lambdas.size() || controls.size() != thetas.size()) {
    throw Error(ErrorCode::invalid_argument, "design_source: controls, multipliers and states differ in count");
  }
  std::vector<double> rho(alpha.size(), 0.0);
  for (std::size_t i = 0; i < controls.size(); ++i) {
    require_same_grid(alpha, lambdas[i], "design_source");
    require_same_grid(alpha, thetas[i], "design_source");
    for (std::size_t j = 0; j < rho.size(); ++j) {
      rho[j] += lambdas[i][j] * controls[i].h().dot(m_derivative(alpha[j] + thetas[i][j], 2));
    }
  }
  return ScalarField(alpha.grid(), std::move(rho));
}

ScalarField design_update(const ControlSet& controls, const std::vector<ScalarField>& lambdas,
                          const std::vector<ScalarField>& thetas, const ScalarField& alpha_prev,
                          double epsilon) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "design_update: epsilon must be > 0 (P_alpha degenerates at 0)");
  }
  const ScalarField rho = design_source(controls, lambdas, thetas, alpha_prev);
  return double_integral_representation((-1.0 / epsilon) * rho).with_role(FieldRole::design);
}

std::vector<Vec2> curve(const ScalarField& theta, double ell) {
  if (!(ell > 0.0)) throw Error(ErrorCode::invalid_argument, "curve: ell must be > 0");
  const double half = 0.5 * ell * theta.grid().spacing();
  std::vector<Vec2> pts(theta.size());
  Vec2 prev_m = m_derivative(theta[0], 0);
  for (std::size_t j = 1; j < theta.size(); ++j) {
    const Vec2 mj = m_derivative(theta[j], 0);
    pts[j] = pts[j - 1] + half * (prev_m + mj);
    prev_m = mj;
  }
  return pts;
}

void write_curve_csv(std::ostream& out, const ScalarField& theta, double ell) {
  const std::vector<Vec2> pts = curve(theta, ell);
  out << "s,x,y\n" << std::setprecision(17);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    out << theta.grid().node(j) << ',' << pts[j].x << ',' << pts[j].y << '\n';
  }
}

double state_residual(const ScalarField& theta, const ScalarField& alpha, const Control& h) {
  require_same_grid(theta, alpha, "state_residual");
  return bvp_residual(state_source(h, alpha), theta);
}

double adjoint_residual(const ScalarField& lambda, const Control& h, const ScalarField& alpha,
                        const ScalarField& theta, const ScalarField& target) {
  require_same_grid(lambda, alpha, "adjoint_residual");
  require_same_grid(lambda, theta, "adjoint_residual");
  require_same_grid(lambda, target, "adjoint_residual");
  std::vector<double> r(theta.size()), misfit(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    r[j] = h.h().dot(m_derivative(alpha[j] + theta[j], 2));
    misfit[j] = target[j] - theta[j];
  }
  PointwiseSource src;
  src.lipschitz = h.magnitude();
  src.eval = [&r, &misfit](std::size_t j, double v) { return SourceValue{-v * r[j] + misfit[j], -r[j]}; };
  return bvp_residual(src, lambda);
}

}  // namespace elastica
