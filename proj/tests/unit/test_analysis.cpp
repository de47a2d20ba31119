// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "elastica/analysis.hpp"
#include "elastica/errors.hpp"
#include "oracles.hpp"

using namespace elastica;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

// Tip rotation at H = 3, from the standard library's K and bisection.
constexpr double tip_at_3 = 1.2245236054571167;

}  // namespace

TEST_CASE("presets") {
  const Grid g(100);
  CHECK(sup_norm(preset_zero(g)) == 0.0);
  const ScalarField p = preset_parabolic(g, 0.3);
  CHECK(p.back() == doctest::Approx(0.15));
  CHECK(p.role() == FieldRole::target);
  const ScalarField q = preset_quarter_turn(g);
  CHECK(q.front() == 0.0);
  CHECK(q.back() == doctest::Approx(oracle::pi / 2));
  CHECK(std::abs(derivative(q).back()) <= 1e-3);
}

TEST_CASE("attainable design for a straight target") {
  const Grid g(100);
  const AttainableDesign d = attainable_design(preset_zero(g), 1.7);
  CHECK(d.control.hx() == doctest::Approx(1.7));
  CHECK(d.control.hy() == 0.0);
  CHECK(sup_norm(d.alpha) == 0.0);
  CHECK(sup_norm(solve_state(d.control, d.alpha)) <= 1e-14);
}

TEST_CASE("attainable design for constant curvature cancels to minus the target") {
  const Grid g(400);
  const ScalarField t = preset_parabolic(g, 0.3);
  const AttainableDesign d = attainable_design(t, 1.0);
  CHECK(d.alpha.front() == 0.0);
  for (std::size_t j = 0; j < t.size(); ++j) CHECK(std::abs(d.alpha[j] + t[j]) <= 1e-8);
  const double ds2 = g.spacing() * g.spacing();
  CHECK(state_residual(t, d.alpha, d.control) <= 10 * ds2);
  CHECK(sup_norm(solve_state(d.control, d.alpha) - t) <= 10 * ds2);
}

TEST_CASE("attainability preconditions") {
  const Grid g(200);
  const ScalarField t = preset_quarter_turn(g);
  const double c = max_target_curvature(t);
  CHECK(c == doctest::Approx(std::pow(oracle::pi, 3) / 8).epsilon(1e-3));
  CHECK(code_of([&] { attainable_design(t, c); }) == ErrorCode::h_too_small);
  CHECK(code_of([&] { attainable_design(t, 0.5 * c); }) == ErrorCode::h_too_small);
  const ScalarField shifted = ScalarField::from_function(g, [](double s) { return 0.1 + s; }, FieldRole::target);
  CHECK(code_of([&] { attainable_design(shifted, 10.0); }) == ErrorCode::boundary_mismatch);
  const ScalarField sloped = ScalarField::from_function(g, [](double s) { return s; }, FieldRole::target);
  CHECK(code_of([&] { attainable_design(sloped, 10.0); }) == ErrorCode::boundary_mismatch);
  try {
    attainable_design(t, c);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("H > max|target''|") != std::string::npos);
  }
}

TEST_CASE("attainable round trip above the buckling threshold") {
  const Grid g(400);
  const ScalarField t = preset_quarter_turn(g);
  const AttainableDesign d = attainable_design(t, 1.5 * max_target_curvature(t));
  CHECK(d.control.magnitude() > uniqueness_threshold);
  const double ds2 = g.spacing() * g.spacing();
  CHECK(state_residual(t, d.alpha, d.control) <= 10 * ds2);
  CHECK(attainment_error({d.control}, d.alpha, {t}) <= (10 * ds2) * (10 * ds2));
}

TEST_CASE("complete elliptic integral") {
  CHECK(std::abs(complete_elliptic_K(0.0) - oracle::pi / 2) <= 1e-12);
  CHECK(std::abs(complete_elliptic_K(1.0 / std::sqrt(2.0)) - 1.85407467730137) <= 1e-12);
  for (int i = 0; i <= 99; ++i) {
    const double k = 0.01 * i;
    CHECK(std::abs(complete_elliptic_K(k) - oracle::elliptic_K_quadrature(k)) <= 1e-10);
    CHECK(std::abs(complete_elliptic_K(k) - std::comp_ellint_1(k)) <= 1e-13 * std::comp_ellint_1(k));
  }
  double prev = complete_elliptic_K(0.0);
  for (int i = 1; i <= 999; ++i) {
    const double cur = complete_elliptic_K(0.001 * i);
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK_THROWS_AS(complete_elliptic_K(1.0), Error);
  CHECK_THROWS_AS(complete_elliptic_K(-0.1), Error);
}

TEST_CASE("incomplete elliptic integral") {
  for (double k : {0.0, 0.3, 0.9}) {
    for (double phi : {0.1, 0.7, 1.5}) {
      CHECK(std::abs(incomplete_elliptic_F(phi, k) - std::ellint_1(k, phi)) <= 1e-12);
    }
    CHECK(std::abs(incomplete_elliptic_F(oracle::pi / 2, k) - complete_elliptic_K(k)) <= 1e-12);
  }
}

TEST_CASE("bifurcation tip") {
  CHECK(code_of([] { bifurcation_tip(2.0); }) == ErrorCode::no_nontrivial_branch);
  CHECK(code_of([] { bifurcation_tip(2.4); }) == ErrorCode::no_nontrivial_branch);
  CHECK(bifurcation_tip(uniqueness_threshold * 1.0001) < 0.05);
  CHECK(std::abs(bifurcation_tip(3.0) - tip_at_3) <= 1e-12);
  for (double H : {2.5, 4.0, 7.5, 20.0}) CHECK(std::abs(bifurcation_tip(H) - oracle::tip_rotation(H)) <= 1e-10);
  double prev = 0.0;
  for (double H = 2.47; H <= 20.0; H += 0.25) {
    const double t = bifurcation_tip(H);
    CHECK(t > prev);
    CHECK(t < oracle::pi);
    prev = t;
  }
}

TEST_CASE("bifurcation profile") {
  const Grid g(400);
  const BranchPoint bp = bifurcation_profile(3.0, g);
  CHECK(bp.theta1 == bifurcation_tip(3.0));
  CHECK(bp.profile.front() == 0.0);
  CHECK(bp.profile.back() == bp.theta1);
  for (std::size_t j = 1; j < bp.profile.size(); ++j) CHECK(bp.profile[j] > bp.profile[j - 1]);
  const double ds2 = g.spacing() * g.spacing();
  const ScalarField z = ScalarField::zeros(g, FieldRole::design);
  CHECK(state_residual(bp.profile, z, Control(-3.0, 0.0)) <= 10 * ds2);
  // the discrete solver started at the closed-form profile stays on the branch
  const ScalarField th = solve_state(Control(-3.0, 0.0), z, {}, bp.profile);
  CHECK(sup_norm(th - bp.profile) <= 10 * ds2);
  CHECK(sup_norm(th) > 1.0);
  CHECK(code_of([&] { bifurcation_profile(2.0, g); }) == ErrorCode::no_nontrivial_branch);
}

TEST_CASE("regularity check") {
  const Grid g(400);
  const double ds2 = g.spacing() * g.spacing();
  const ScalarField z = ScalarField::zeros(g, FieldRole::design);
  const RegularityReport r0 = regularity_check(Control(0, 0), z, z, 3);
  for (int k = 1; k <= 3; ++k) {
    const double exact = oracle::shifted_mixed_eigenvalue(k);
    CHECK(std::abs(r0.spectrum.eigenvalues[k - 1] - exact) <= 2 * exact * exact * ds2);
  }
  CHECK(std::abs(r0.spectrum.dist_to_one - oracle::pi * oracle::pi / 4) <= 1e-4);
  CHECK(r0.verdict == Verdict::regular);
  CHECK(r0.sufficient_condition);

  for (double mag : {0.5, 1.5, 2.4}) {
    const Control h(mag * std::cos(1.0), mag * std::sin(1.0));
    const ScalarField alpha = ScalarField::from_function(g, [](double s) { return 0.8 * s; }, FieldRole::design);
    const RegularityReport r = regularity_check(h, alpha, solve_state(h, alpha));
    CHECK(r.verdict == Verdict::regular);
  }
}

TEST_CASE("constant potential resonance flips where the eigenvalue crosses one") {
  // h = (-c, 0), alpha = theta = 0 gives r = h.D^2m(0) = c, so
  // mu_1 = (1 + pi^2/4) / (1 + c), crossing 1 at c = pi^2/4.
  const Grid g(400);
  const ScalarField z = ScalarField::zeros(g, FieldRole::design);
  const double crossing = oracle::pi * oracle::pi / 4;
  auto verdict = [&](double c) { return regularity_check(Control(-c, 0.0), z, z, 1).verdict; };
  CHECK(verdict(0.99 * crossing) == Verdict::regular);
  CHECK(verdict(crossing) == Verdict::resonant);
  CHECK(verdict(1.01 * crossing) == Verdict::regular);
  const double mu = regularity_check(Control(-1.0, 0.0), z, z, 1).spectrum.eigenvalues[0];
  CHECK(std::abs(mu - (1 + crossing) / 2) <= 1e-4);
}

TEST_CASE("epsilon sweep on a straight target") {
  const Grid g(100);
  const std::vector<SweepRow> rows = epsilon_sweep(preset_zero(g), {1.0, 0.1});
  REQUIRE(rows.size() == 2);
  for (const SweepRow& r : rows) {
    CHECK(r.status == SolveStatus::converged);
    CHECK(r.attainment_error == 0.0);
    CHECK_FALSE(r.contraction_lost);
  }
  CHECK_THROWS_AS(epsilon_sweep(preset_zero(g), {0.0}), Error);
}

TEST_CASE("epsilon sweep flags rows without contraction") {
  const Grid g(200);
  ProblemSpec base;
  base.inner_max = 50;
  const std::vector<SweepRow> rows = epsilon_sweep(preset_parabolic(g, 0.3), {1.0, 0.01}, base);
  CHECK(rows[0].status == SolveStatus::converged);
  CHECK_FALSE(rows[0].contraction_lost);
  CHECK(rows[1].contraction_lost);
  std::stringstream ss;
  write_sweep_csv(ss, rows);
  CHECK(ss.str().rfind("epsilon,cost,attainment_error,status\n", 0) == 0);
  CHECK(ss.str().find("contraction_lost") != std::string::npos);
}

TEST_CASE("branch csv") {
  std::stringstream ss;
  write_branch_csv(ss, {{3.0, bifurcation_tip(3.0)}});
  CHECK(ss.str().rfind("H,theta1\n3,", 0) == 0);
}
