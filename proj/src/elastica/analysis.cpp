// SPDX-License-Identifier: Apache-2.0
#include "elastica/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "elastica/errors.hpp"
#include "elastica/parallel.hpp"

namespace elastica {

namespace {

constexpr double arcsin_clamp = 1.0 - 1e-12;
constexpr double curvature_margin = 1e-6;

std::vector<double> attainability_curvature(const ScalarField& t) {
  const std::size_t n = t.size();
  const ScalarField one_sided = second_derivative_interior(t);
  const double ds2 = t.grid().spacing() * t.grid().spacing();
  std::vector<double> c(one_sided.values().begin(), one_sided.values().end());
  c[n - 1] = 2.0 * (t[n - 2] - t[n - 1]) / ds2;
  return c;
}

double clamped_asin(double x) { return std::asin(std::clamp(x, -arcsin_clamp, arcsin_clamp)); }

double simpson(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

void require_buckled(double H, const char* where) {
  if (!std::isfinite(H)) throw Error(ErrorCode::invalid_argument, std::string(where) + ": H must be finite");
  if (H <= uniqueness_threshold) {
    std::ostringstream msg;
    msg << where << ": H = " << H << " <= pi^2/4; only the trivial solution exists";
    throw Error(ErrorCode::no_nontrivial_branch, msg.str());
  }
}

}  // namespace

ScalarField preset_zero(const Grid& grid) { return ScalarField::zeros(grid, FieldRole::target); }

ScalarField preset_parabolic(const Grid& grid, double a) {
  if (!std::isfinite(a)) throw Error(ErrorCode::invalid_argument, "preset_parabolic: a must be finite");
  return ScalarField::from_function(grid, [a](double s) { return a * s * (2.0 - s) / 2.0; }, FieldRole::target);
}

ScalarField preset_quarter_turn(const Grid& grid) {
  return ScalarField::from_function(grid, [](double s) { return 0.5 * pi * std::sin(0.5 * pi * s); },
                                    FieldRole::target);
}

double max_target_curvature(const ScalarField& target) {
  const std::vector<double> c = attainability_curvature(target);
  return std::max(sup_norm(c), sup_norm(second_derivative_interior(target)));
}

AttainableDesign attainable_design(const ScalarField& target, double H) {
  const Grid& grid = target.grid();
  const double ds = grid.spacing();
  if (grid.n_cells() < 3) throw Error(ErrorCode::grid_too_coarse, "attainable_design: needs n_cells >= 3");
  if (std::abs(target.front()) > 1e-12) {
    throw Error(ErrorCode::boundary_mismatch, "attainable_design: target must vanish at s = 0");
  }
  const std::vector<double> c = attainability_curvature(target);
  const double cmax = max_target_curvature(target);
  const double slope = derivative(target).back();
  if (std::abs(slope) > 10.0 * ds * ds * (1.0 + cmax)) {
    std::ostringstream msg;
    msg << "attainable_design: target slope at s = 1 is " << slope << ", expected 0";
    throw Error(ErrorCode::boundary_mismatch, msg.str());
  }
  if (!std::isfinite(H) || !(H > cmax + curvature_margin)) {
    std::ostringstream msg;
    msg << std::setprecision(10) << "attainable_design: requires H > max|target''| strictly, got H = " << H
        << " <= max|target''| = " << cmax;
    throw Error(ErrorCode::h_too_small, msg.str());
  }
  const double psi = -clamped_asin(c[0] / H);
  std::vector<double> alpha(target.size());
  for (std::size_t j = 0; j < alpha.size(); ++j) alpha[j] = clamped_asin(c[j] / H) - target[j] + psi;
  alpha[0] = 0.0;
  return {Control(H * std::cos(psi), H * std::sin(psi)), ScalarField(grid, std::move(alpha), FieldRole::design)};
}

double complete_elliptic_K(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw Error(ErrorCode::invalid_argument, "complete_elliptic_K: k must lie in [0, 1)");
  double a = 1.0;
  double g = std::sqrt(1.0 - k * k);
  for (int it = 0; it < 64 && std::abs(a - g) > 1e-15 * a; ++it) {
    const double next = 0.5 * (a + g);
    g = std::sqrt(a * g);
    a = next;
  }
  return pi / (2.0 * a);
}

double incomplete_elliptic_F(double phi, double k) {
  if (!(k >= 0.0 && k < 1.0)) throw Error(ErrorCode::invalid_argument, "incomplete_elliptic_F: k must lie in [0, 1)");
  if (!std::isfinite(phi)) throw Error(ErrorCode::invalid_argument, "incomplete_elliptic_F: phi must be finite");
  if (phi == 0.0) return 0.0;
  const double k2 = k * k;
  auto f = [k2](double t) {
    const double s = std::sin(t);
    return 1.0 / std::sqrt(1.0 - k2 * s * s);
  };
  const double fa = f(0.0);
  const double fm = f(0.5 * phi);
  const double fb = f(phi);
  return adaptive_simpson(f, 0.0, phi, fa, fm, fb, simpson(0.0, phi, fa, fm, fb), 1e-15, 40);
}

double bifurcation_tip(double H) {
  require_buckled(H, "bifurcation_tip");
  const double target = std::sqrt(H);
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid >= 1.0 || complete_elliptic_K(mid) > target) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 1e-16) break;
  }
  return 2.0 * std::asin(0.5 * (lo + hi));
}

BranchPoint bifurcation_profile(double H, const Grid& grid) {
  require_buckled(H, "bifurcation_profile");
  const double theta1 = bifurcation_tip(H);
  const double k = std::sin(0.5 * theta1);
  const double root_h = std::sqrt(H);
  std::vector<double> theta(grid.node_count());
  double phi = 0.0;
  for (std::size_t j = 1; j < theta.size(); ++j) {
    // F(phi, k) = sqrt(H) s, monotone in phi; Newton from the previous node, bisection safeguard.
    const double goal = root_h * grid.node(j);
    double lo = phi;
    double hi = 0.5 * pi;
    for (int it = 0; it < 100; ++it) {
      const double F = incomplete_elliptic_F(phi, k);
      const double r = F - goal;
      if (r > 0.0) {
        hi = phi;
      } else {
        lo = phi;
      }
      const double sp = std::sin(phi);
      double next = phi - r * std::sqrt(1.0 - k * k * sp * sp);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - phi) <= 1e-15 || hi - lo <= 1e-15) {
        phi = next;
        break;
      }
      phi = next;
    }
    theta[j] = 2.0 * std::asin(k * std::sin(phi));
  }
  theta.back() = theta1;
  return {H, theta1, ScalarField(grid, std::move(theta), FieldRole::shape)};
}

const char* to_string(Verdict v) noexcept { return v == Verdict::regular ? "regular" : "resonant"; }

RegularityReport regularity_check(const Control& h, const ScalarField& alpha, const ScalarField& theta, int k) {
  require_same_grid(alpha, theta, "regularity_check");
  const Grid& grid = alpha.grid();
  std::vector<double> q(alpha.size()), w(alpha.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double r = h.h().dot(m_derivative(alpha[j] + theta[j], 2));
    q[j] = std::max(-r, 0.0) + 1.0;
    w[j] = std::max(r, 0.0) + 1.0;
  }
  RegularityReport rep;
  rep.spectrum = sl_eigen(ScalarField(grid, std::move(q)), ScalarField(grid, std::move(w)), k);
  rep.tolerance = 10.0 * grid.spacing() * grid.spacing();
  rep.verdict = rep.spectrum.dist_to_one < rep.tolerance ? Verdict::resonant : Verdict::regular;
  rep.sufficient_condition = h.magnitude() < uniqueness_threshold;
  return rep;
}

std::vector<SweepRow> epsilon_sweep(const ScalarField& target, const std::vector<double>& epsilons,
                                    const ProblemSpec& base) {
  for (double e : epsilons) {
    if (!(e > 0.0) || !std::isfinite(e)) throw Error(ErrorCode::invalid_argument, "epsilon_sweep: epsilon must be > 0");
  }
  std::vector<SweepRow> rows(epsilons.size());
  parallel_for(epsilons.size(), [&](std::size_t r) {
    ProblemSpec spec = base;
    spec.targets = {target.with_role(FieldRole::target)};
    spec.epsilon = epsilons[r];
    spec.gamma = epsilons[r];
    SweepRow& row = rows[r];
    row.epsilon = epsilons[r];
    try {
      auto [state, report] = outer_loop(spec);
      row.status = report.status;
      row.cost = report.cost;
      row.contraction_lost = report.contraction_lost;
      row.inner_contraction = report.inner_contraction;
      row.message = report.message;
      row.attainment_error = std::numeric_limits<double>::quiet_NaN();
      if (state.thetas.size() == 1) {
        const ScalarField d = state.thetas[0] - spec.targets[0];
        const double n = l2_norm(d);
        row.attainment_error = 0.5 * n * n;
      }
    } catch (const Error& e) {
      row.status = SolveStatus::diverged;
      row.contraction_lost = true;
      row.cost = std::numeric_limits<double>::quiet_NaN();
      row.attainment_error = std::numeric_limits<double>::quiet_NaN();
      row.message = e.what();
    }
  });
  return rows;
}

void write_branch_csv(std::ostream& out, const std::vector<std::pair<double, double>>& rows) {
  out << "H,theta1\n" << std::setprecision(17);
  for (const auto& [H, t] : rows) out << H << ',' << t << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "epsilon,cost,attainment_error,status\n" << std::setprecision(17);
  for (const SweepRow& r : rows) {
    out << r.epsilon << ',' << r.cost << ',' << r.attainment_error << ',' << to_string(r.status);
    if (r.contraction_lost) out << "+contraction_lost";
    out << '\n';
  }
}

}  // namespace elastica
