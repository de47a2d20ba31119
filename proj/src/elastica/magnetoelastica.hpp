// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <iosfwd>
#include <optional>
#include <vector>

#include "elastica/bvp.hpp"
#include "elastica/mesh_field.hpp"

namespace elastica {

inline constexpr double pi = 3.14159265358979323846;
/// c_p^{-2} = pi^2/4: uniqueness threshold of the state equation.
inline constexpr double uniqueness_threshold = pi * pi / 4.0;
/// Best constant of the left-clamped Poincare inequality.
inline constexpr double poincare_constant = 2.0 / pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  [[nodiscard]] double norm() const noexcept { return std::hypot(x, y); }
  [[nodiscard]] double dot(const Vec2& o) const noexcept { return x * o.x + y * o.y; }
  friend Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double c, Vec2 a) noexcept { return {c * a.x, c * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Counter-clockwise rotation by angle c.
Vec2 rotate(Vec2 v, double c) noexcept;

/// Dimensionless renormalized applied field.
class Control {
 public:
  Control() = default;
  Control(double hx, double hy);
  explicit Control(Vec2 h) : Control(h.x, h.y) {}

  [[nodiscard]] const Vec2& h() const noexcept { return h_; }
  [[nodiscard]] double hx() const noexcept { return h_.x; }
  [[nodiscard]] double hy() const noexcept { return h_.y; }
  [[nodiscard]] double magnitude() const noexcept { return h_.norm(); }
  [[nodiscard]] bool in_uniqueness_ball() const noexcept { return magnitude() < uniqueness_threshold; }

 private:
  Vec2 h_;
};

using ControlSet = std::vector<Control>;

/// sum_i |h_i|.
double aggregate_magnitude(const ControlSet& controls);
/// max_i |h_i|.
double max_magnitude(const ControlSet& controls);

struct PhysicalScaling {
  double M0 = 0.0;   ///< magnetization intensity [A m^-2]
  double ell = 0.0;  ///< length [m]
  double S = 0.0;    ///< bending stiffness [N m^2]
  double mu0 = 4e-7 * pi;
  Vec2 H_phys;       ///< applied field [A m^-1]
};

/// h = mu0 M0 ell^2 / S * H.
Control renormalize(const PhysicalScaling& p);

/// N-th derivative of m(v) = (cos v, sin v): m rotated by N pi/2.
Vec2 m_derivative(double v, int order);

/// Source of the state equation, f(s, v) = -h . Dm(alpha(s) + v).
PointwiseSource state_source(const Control& h, const ScalarField& alpha);

/// Solves (P_theta). Defaults to the zero initial guess; fields with
/// |h| >= pi^2/4 and no explicit guess are reached by continuation in |h| from
/// the unloaded state.
ScalarField solve_state(const Control& h, const ScalarField& alpha, const SolveOptions& opts = {},
                        const std::optional<ScalarField>& initial = std::nullopt);

/// int_0^1 ( (theta')^2 / 2 - h . m(theta + alpha) ).
double energy(const ScalarField& theta, const ScalarField& alpha, const Control& h);

/// Solves (P_lambda): -lambda'' - lambda h.D^2m(alpha + theta) = theta - target.
ScalarField solve_adjoint(const Control& h, const ScalarField& alpha, const ScalarField& theta,
                          const ScalarField& target);

/// gamma h = -int lambda Dm(alpha + theta).
Control control_update(const ScalarField& lambda, const ScalarField& alpha, const ScalarField& theta,
                       double gamma);

/// rho(s) = sum_i lambda_i h_i . D^2m(alpha + theta_i).
ScalarField design_source(const ControlSet& controls, const std::vector<ScalarField>& lambdas,
                          const std::vector<ScalarField>& thetas, const ScalarField& alpha);

/// New design from (P_alpha): alpha = -(1/eps) int_0^s int_{s'}^1 rho, with rho
/// built from the previous design.
ScalarField design_update(const ControlSet& controls, const std::vector<ScalarField>& lambdas,
                          const std::vector<ScalarField>& thetas, const ScalarField& alpha_prev,
                          double epsilon);

/// r(s) = ell int_0^s m(theta), cumulative trapezoid; one point per node.
std::vector<Vec2> curve(const ScalarField& theta, double ell = 1.0);

/// CSV with header `s,x,y`.
void write_curve_csv(std::ostream& out, const ScalarField& theta, double ell = 1.0);

/// Discrete residual of (P_theta); see bvp_residual.
double state_residual(const ScalarField& theta, const ScalarField& alpha, const Control& h);

/// Discrete residual of (P_lambda) in the same norm.
double adjoint_residual(const ScalarField& lambda, const Control& h, const ScalarField& alpha,
                        const ScalarField& theta, const ScalarField& target);

}  // namespace elastica
