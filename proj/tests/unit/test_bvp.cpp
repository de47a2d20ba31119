// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "elastica/bvp.hpp"
#include "elastica/errors.hpp"
#include "elastica/tridiagonal.hpp"
#include "oracles.hpp"

using namespace elastica;

namespace {

constexpr double quarter_pi_sq = oracle::pi * oracle::pi / 4.0;

PointwiseSource constant_source(double c) {
  return {[c](std::size_t, double) { return SourceValue{c, 0.0}; }, 0.0};
}

PointwiseSource sine_source(double H) {
  return {[H](std::size_t, double v) { return SourceValue{-H * std::sin(v), -H * std::cos(v)}; }, H};
}

ScalarField smooth_random(const Grid& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  const double a = u(rng), b = u(rng), c = 3 * u(rng);
  return ScalarField::from_function(g, [=](double s) { return a + b * std::cos(c * s) + s * s * a * b; });
}

ScalarField constant(const Grid& g, double c) {
  return ScalarField::from_function(g, [c](double) { return c; });
}

}  // namespace

TEST_CASE("tridiagonal LU with pivoting") {
  // [[1,2,0],[3,1,1],[0,4,5]] x = [5, 8, 23] -> x = [1, 2, 3]
  const TridiagonalLU lu({3, 4}, {1, 1, 5}, {2, 1});
  std::vector<double> rhs = {5, 8, 23};
  lu.solve(rhs);
  CHECK(rhs[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rhs[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rhs[2] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK_FALSE(lu.singular());

  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  const std::size_t n = 40;
  std::vector<double> sub(n - 1), diag(n), sup(n - 1), x(n), b(n);
  for (auto& v : sub) v = u(rng);
  for (auto& v : diag) v = u(rng);
  for (auto& v : sup) v = u(rng);
  for (auto& v : x) v = u(rng);
  tridiagonal_multiply(sub, diag, sup, x, b);
  const TridiagonalLU lu2(sub, diag, sup);
  lu2.solve(b);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(b[i] - x[i]) <= 1e-9);
}

TEST_CASE("zero source gives the zero solution") {
  const Grid g(50);
  const ScalarField v = solve_nonlinear_bvp(constant_source(0.0), {}, ScalarField::zeros(g));
  CHECK(sup_norm(v) == 0.0);
}

TEST_CASE("constant load matches the closed form") {
  const Grid g(400);
  const double H = 1e-3;
  const ScalarField v = solve_nonlinear_bvp(constant_source(-H), {}, ScalarField::zeros(g));
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double s = g.node(j);
    CHECK(std::abs(v[j] - H * s * (2 - s) / 2) <= 1e-12);
  }
  CHECK(bvp_residual(constant_source(-H), v) <= 1e-10);
}

TEST_CASE("sub-critical buckling load keeps the trivial solution") {
  const Grid g(200);
  const ScalarField guess = ScalarField::from_function(g, [](double s) { return 0.3 * s; });
  const ScalarField v = solve_nonlinear_bvp(sine_source(2.0), {}, guess);
  CHECK(sup_norm(v) <= 1e-9);
}

TEST_CASE("uniqueness regime is independent of the initial guess") {
  const Grid g(200);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const double L = quarter_pi_sq * (1 - 1e-3) * std::abs(u(rng));
    const double phase = 3 * u(rng);
    const PointwiseSource src{[L, phase](std::size_t j, double v) {
                                const double x = v + phase + 0.01 * static_cast<double>(j);
                                return SourceValue{L * std::sin(x), L * std::cos(x)};
                              },
                              L};
    const ScalarField a = solve_nonlinear_bvp(src, {}, ScalarField::zeros(g));
    const ScalarField b = solve_nonlinear_bvp(src, {}, constant(g, 1.0));
    const ScalarField c = solve_nonlinear_bvp(src, {}, constant(g, -1.0));
    const ScalarField d = solve_nonlinear_bvp(src, {}, smooth_random(g, rng));
    CHECK(sup_norm(a - b) <= 1e-9);
    CHECK(sup_norm(a - c) <= 1e-9);
    CHECK(sup_norm(a - d) <= 1e-9);
    // a priori bounds
    const double ds2 = g.spacing() * g.spacing();
    CHECK(sup_norm(a) <= L + ds2);
    const double cp = 2.0 / oracle::pi;
    double f0 = 0.0;
    for (std::size_t j = 0; j < g.node_count(); ++j) f0 = std::max(f0, std::abs(src.eval(j, 0.0).value));
    CHECK(h1_seminorm(a) <= cp / (1 - L * cp * cp) * f0 + ds2);
  }
}

TEST_CASE("stats and option validation") {
  const Grid g(100);
  SolveStats stats;
  solve_nonlinear_bvp(sine_source(1.0), {}, ScalarField::from_function(g, [](double s) { return s; }), &stats);
  CHECK(stats.residual <= 1e-10);
  CHECK(stats.newton_iterations >= 1);
  SolveOptions bad;
  bad.tol_residual = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = {};
  bad.max_newton = 0;
  CHECK_THROWS_AS(solve_nonlinear_bvp(sine_source(1.0), bad, ScalarField::zeros(g)), Error);
}

TEST_CASE("non-finite source is reported") {
  const Grid g(20);
  const PointwiseSource src{[](std::size_t, double) { return SourceValue{NAN, 0.0}; }, 0.0};
  try {
    solve_nonlinear_bvp(src, {}, ScalarField::zeros(g));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::non_finite_value || e.code() == ErrorCode::non_convergence));
  }
}

TEST_CASE("linear solver") {
  const Grid g(400);
  CHECK(sup_norm(solve_linear_bvp(constant(g, 2.0), ScalarField::zeros(g))) == 0.0);
  const ScalarField u = solve_linear_bvp(ScalarField::zeros(g), constant(g, 1.0));
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double s = g.node(j);
    CHECK(std::abs(u[j] - s * (2 - s) / 2) <= 1e-12);
  }
  try {
    solve_linear_bvp(constant(g, -quarter_pi_sq), ScalarField::from_function(g, [](double s) { return 1 + s; }));
    FAIL("expected SingularOperator");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_operator);
  }
}

TEST_CASE("double integral representation") {
  const Grid g(400);
  CHECK(sup_norm(double_integral_representation(ScalarField::zeros(g))) == 0.0);
  const ScalarField v = double_integral_representation(constant(g, 1.0));
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double s = g.node(j);
    CHECK(std::abs(v[j] - (s - s * s / 2)) <= 1e-13);
  }
  std::mt19937 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const ScalarField rhs = smooth_random(g, rng);
    const ScalarField a = double_integral_representation(rhs);
    const ScalarField b = solve_linear_bvp(ScalarField::zeros(g), rhs);
    CHECK(sup_norm(a - b) <= 1e-8);
    CHECK(a.front() == 0.0);
  }
}

TEST_CASE("Sturm-Liouville eigenvalues") {
  const Grid g(400);
  const double ds2 = g.spacing() * g.spacing();
  const SLSpectrum sp = sl_eigen(constant(g, 1.0), constant(g, 1.0), 5);
  REQUIRE(sp.eigenvalues.size() == 5);
  for (int k = 1; k <= 5; ++k) {
    const double exact = oracle::shifted_mixed_eigenvalue(k);
    CHECK(std::abs(sp.eigenvalues[k - 1] - exact) <= 2.0 * std::pow(exact, 2) * ds2);
  }
  CHECK(std::abs(sp.eigenvalues[0] - 3.4674011) <= 1e-4);
  CHECK(sp.dist_to_one == doctest::Approx(sp.eigenvalues[0] - 1.0));

  CHECK(std::abs(sl_eigen(ScalarField::zeros(g), constant(g, 1.0), 1).eigenvalues[0] - quarter_pi_sq) <= 1e-4);

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = 3 * u(rng), b = 2 * u(rng);
    const ScalarField q = ScalarField::from_function(g, [a](double s) { return a * s * s; });
    const ScalarField w = ScalarField::from_function(g, [b](double s) { return 1 + b * std::sin(3 * s) * std::sin(3 * s); });
    const SLSpectrum r = sl_eigen(q, w, 8);
    CHECK(r.eigenvalues.front() > 0.0);
    for (std::size_t k = 1; k < r.eigenvalues.size(); ++k) CHECK(r.eigenvalues[k] > r.eigenvalues[k - 1]);
  }

  CHECK_THROWS_AS(sl_eigen(constant(g, 1.0), constant(g, 0.0), 1), Error);
  try {
    sl_eigen(constant(g, 1.0), ScalarField::from_function(g, [](double s) { return s - 0.5; }), 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_weight);
  }
}

TEST_CASE("Poincare constant converges at second order") {
  const double e100 = std::abs(poincare_constant_check(Grid(100)) - quarter_pi_sq);
  const double e200 = std::abs(poincare_constant_check(Grid(200)) - quarter_pi_sq);
  const double e400 = std::abs(poincare_constant_check(Grid(400)) - quarter_pi_sq);
  CHECK(e400 <= 1e-4);
  CHECK(e100 / e200 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(e200 / e400 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(poincare_constant_check(Grid(3)) > 0.0);
}
