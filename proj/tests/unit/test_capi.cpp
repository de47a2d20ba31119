// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "elastica/elastica.h"

namespace {

std::vector<double> values(const elastica_field* f) {
  std::vector<double> v(elastica_field_size(f));
  REQUIRE(elastica_field_values(f, v.data(), v.size()) == ELASTICA_OK);
  return v;
}

double sup(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("version and names") {
  CHECK(std::string(elastica_version()) == ELASTICA_VERSION);
  CHECK(std::string(elastica_status_name(ELASTICA_OK)) == "Ok");
  CHECK(std::string(elastica_status_name(ELASTICA_H_TOO_SMALL)) == "HTooSmall");
  CHECK(std::string(elastica_solve_status_name(ELASTICA_SOLVE_CONVERGED)) == "converged");
}

TEST_CASE("field lifecycle and argument checks") {
  elastica_field* f = nullptr;
  const double v[] = {0.0, 0.1, 0.2, 0.3, 0.4};
  REQUIRE(elastica_field_create(4, v, 5, &f) == ELASTICA_OK);
  CHECK(elastica_field_size(f) == 5);
  CHECK(elastica_field_cells(f) == 4);
  CHECK(values(f)[3] == 0.3);
  double small[2];
  CHECK(elastica_field_values(f, small, 2) == ELASTICA_INVALID_ARGUMENT);
  elastica_field_destroy(f);

  elastica_field* g = nullptr;
  CHECK(elastica_field_create(4, v, 3, &g) == ELASTICA_INVALID_ARGUMENT);
  CHECK(g == nullptr);
  CHECK(elastica_field_create(0, v, 1, &g) != ELASTICA_OK);
  CHECK(elastica_field_create(4, nullptr, 5, &g) == ELASTICA_INVALID_ARGUMENT);
  const double bad[] = {0.0, NAN, 0.2, 0.3, 0.4};
  CHECK(elastica_field_create(4, bad, 5, &g) == ELASTICA_NON_FINITE_VALUE);
  CHECK(std::string(elastica_last_error()).size() > 0);
  CHECK(elastica_field_preset(10, "spiral", 0.0, &g) == ELASTICA_INVALID_ARGUMENT);
  elastica_field_destroy(nullptr);
}

TEST_CASE("state solve and csv round trip") {
  elastica_field* alpha = nullptr;
  REQUIRE(elastica_field_preset(200, "zero", 0.0, &alpha) == ELASTICA_OK);
  elastica_field* theta = nullptr;
  REQUIRE(elastica_solve_state(0.0, 0.001, alpha, nullptr, &theta) == ELASTICA_OK);
  const std::vector<double> t = values(theta);
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double s = static_cast<double>(j) / 200.0;
    CHECK(std::abs(t[j] - 0.001 * s * (2 - s) / 2) <= 1e-8);
  }
  double r = 1.0;
  REQUIRE(elastica_state_residual(theta, alpha, 0.0, 0.001, &r) == ELASTICA_OK);
  CHECK(r <= 1e-10);

  const char* path = "capi_theta.csv";
  REQUIRE(elastica_field_write_csv(theta, path) == ELASTICA_OK);
  elastica_field* back = nullptr;
  REQUIRE(elastica_field_read_csv(path, &back) == ELASTICA_OK);
  CHECK(values(back) == t);
  std::remove(path);
  CHECK(elastica_field_read_csv("does/not/exist.csv", &back) == ELASTICA_IO_FAILURE);

  elastica_field_destroy(back);
  elastica_field_destroy(theta);
  elastica_field_destroy(alpha);
}

TEST_CASE("poincare constant") {
  double c = 0.0;
  REQUIRE(elastica_poincare_constant(400, &c) == ELASTICA_OK);
  CHECK(std::abs(c - M_PI * M_PI / 4) <= 1e-4);
}

TEST_CASE("program through the C interface") {
  elastica_problem_params params;
  elastica_problem_params_default(&params);
  params.epsilon = 0.1;
  params.gamma = 0.4;
  elastica_problem* problem = nullptr;
  REQUIRE(elastica_problem_create(&params, &problem) == ELASTICA_OK);
  elastica_field* t = nullptr;
  REQUIRE(elastica_field_preset(200, "parabolic", 0.3, &t) == ELASTICA_OK);
  REQUIRE(elastica_problem_add_target(problem, t) == ELASTICA_OK);
  elastica_field* other = nullptr;
  REQUIRE(elastica_field_preset(100, "zero", 0.0, &other) == ELASTICA_OK);
  CHECK(elastica_problem_add_target(problem, other) == ELASTICA_INVALID_ARGUMENT);

  elastica_result* res = nullptr;
  REQUIRE(elastica_program(problem, &res) == ELASTICA_OK);
  elastica_report rep;
  REQUIRE(elastica_result_report(res, &rep) == ELASTICA_OK);
  CHECK(rep.status == ELASTICA_SOLVE_CONVERGED);
  CHECK(rep.residual_state <= 1e-6);
  CHECK(rep.residual_design <= 1e-6);
  CHECK(rep.minimizer_bound.pass);
  CHECK(elastica_result_target_count(res) == 1);
  double hx = 0, hy = 0;
  REQUIRE(elastica_result_control(res, 0, &hx, &hy) == ELASTICA_OK);
  CHECK(hx * hx + hy * hy <= rep.minimizer_bound.rhs + 1e-12);
  CHECK(elastica_result_control(res, 1, &hx, &hy) == ELASTICA_INVALID_ARGUMENT);

  size_t count = 0;
  REQUIRE(elastica_result_outer_ratios(res, nullptr, 0, &count) == ELASTICA_OK);
  CHECK(count > 0);
  std::vector<double> ratios(count);
  REQUIRE(elastica_result_outer_ratios(res, ratios.data(), ratios.size(), &count) == ELASTICA_OK);
  CHECK(elastica_result_inner_loop_count(res) >= static_cast<size_t>(rep.outer_iterations));
  REQUIRE(elastica_result_inner_ratios(res, 0, nullptr, 0, &count) == ELASTICA_OK);

  elastica_field* alpha = nullptr;
  elastica_field* theta = nullptr;
  REQUIRE(elastica_result_alpha(res, &alpha) == ELASTICA_OK);
  REQUIRE(elastica_result_theta(res, 0, &theta) == ELASTICA_OK);
  CHECK(values(alpha)[0] == 0.0);
  elastica_regularity reg;
  REQUIRE(elastica_regularity_check(hx, hy, alpha, theta, 3, &reg) == ELASTICA_OK);
  CHECK(reg.count == 3);
  CHECK_FALSE(reg.resonant);

  elastica_result* direct = nullptr;
  REQUIRE(elastica_direct_minimize(problem, 1e-7, 20000, &direct) == ELASTICA_OK);
  elastica_report drep;
  REQUIRE(elastica_result_report(direct, &drep) == ELASTICA_OK);
  CHECK(drep.status == ELASTICA_SOLVE_CONVERGED);
  CHECK(std::abs(drep.cost - rep.cost) <= 1e-6);

  elastica_field_destroy(alpha);
  elastica_field_destroy(theta);
  elastica_result_destroy(direct);
  elastica_result_destroy(res);
  elastica_field_destroy(other);
  elastica_field_destroy(t);
  elastica_problem_destroy(problem);
}

TEST_CASE("problem validation") {
  elastica_problem_params params;
  elastica_problem_params_default(&params);
  params.gamma = -1.0;
  elastica_problem* problem = nullptr;
  CHECK(elastica_problem_create(&params, &problem) == ELASTICA_INVALID_ARGUMENT);
  elastica_problem_params_default(&params);
  REQUIRE(elastica_problem_create(&params, &problem) == ELASTICA_OK);
  elastica_result* res = nullptr;
  CHECK(elastica_program(problem, &res) == ELASTICA_INVALID_ARGUMENT);
  elastica_problem_destroy(problem);
}

TEST_CASE("analysis entry points") {
  double k = 0.0;
  REQUIRE(elastica_elliptic_K(0.0, &k) == ELASTICA_OK);
  CHECK(std::abs(k - M_PI / 2) <= 1e-12);
  double tip = 0.0;
  CHECK(elastica_bifurcation_tip(2.0, &tip) == ELASTICA_NO_NONTRIVIAL_BRANCH);
  REQUIRE(elastica_bifurcation_tip(3.0, &tip) == ELASTICA_OK);
  CHECK(std::abs(tip - 1.2245236054571167) <= 1e-12);
  elastica_field* profile = nullptr;
  double t1 = 0.0;
  REQUIRE(elastica_bifurcation_profile(3.0, 100, &t1, &profile) == ELASTICA_OK);
  CHECK(values(profile).back() == t1);
  elastica_field_destroy(profile);

  elastica_field* target = nullptr;
  REQUIRE(elastica_field_preset(200, "quarter-turn", 0.0, &target) == ELASTICA_OK);
  double c = 0.0;
  REQUIRE(elastica_max_target_curvature(target, &c) == ELASTICA_OK);
  double hx = 0, hy = 0;
  elastica_field* alpha = nullptr;
  CHECK(elastica_attainable_design(target, 0.5 * c, &hx, &hy, &alpha) == ELASTICA_H_TOO_SMALL);
  CHECK(std::string(elastica_last_error()).find("H > max|target''|") != std::string::npos);
  REQUIRE(elastica_attainable_design(target, 2 * c, &hx, &hy, &alpha) == ELASTICA_OK);
  CHECK(std::hypot(hx, hy) == doctest::Approx(2 * c));
  elastica_field_destroy(alpha);

  const double eps[] = {1.0, 0.3};
  elastica_sweep_row rows[2];
  elastica_field* zero = nullptr;
  REQUIRE(elastica_field_preset(100, "zero", 0.0, &zero) == ELASTICA_OK);
  REQUIRE(elastica_epsilon_sweep(zero, eps, 2, nullptr, rows) == ELASTICA_OK);
  CHECK(rows[0].epsilon == 1.0);
  CHECK(rows[1].cost == 0.0);
  CHECK(rows[1].status == ELASTICA_SOLVE_CONVERGED);
  elastica_field_destroy(zero);
  elastica_field_destroy(target);
}
