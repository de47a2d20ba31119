// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "elastica/errors.hpp"
#include "elastica/mesh_field.hpp"
#include "oracles.hpp"

using namespace elastica;

namespace {
ScalarField field(const Grid& g, double (*f)(double), FieldRole role = FieldRole::generic) {
  return ScalarField::from_function(g, f, role);
}
}  // namespace

TEST_CASE("grid nodes and weights") {
  const Grid g(8);
  CHECK(g.node_count() == 9);
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(8) == 1.0);
  CHECK(g.spacing() == doctest::Approx(0.125));
  double w = 0.0;
  for (std::size_t j = 0; j < g.node_count(); ++j) w += g.weight(j);
  CHECK(w == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(Grid().n_cells() == 400);
  CHECK_THROWS_AS(Grid(0), Error);
}

TEST_CASE("clamp invariant depends on role") {
  const Grid g(4);
  CHECK_NOTHROW(ScalarField(g, {1, 2, 3, 4, 5}, FieldRole::target));
  CHECK_NOTHROW(ScalarField(g, {1, 2, 3, 4, 5}));
  try {
    ScalarField(g, {1, 2, 3, 4, 5}, FieldRole::shape);
    FAIL("expected boundary mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::boundary_mismatch);
  }
  CHECK_THROWS_AS(ScalarField(g, {0, 1, 2}), Error);
  CHECK_THROWS_AS(ScalarField(g, {0, 1, NAN, 3, 4}), Error);
  CHECK_THROWS_AS(static_cast<void>(ScalarField(g, {0.5, 1, 2, 3, 4}).with_role(FieldRole::design)), Error);
}

TEST_CASE("trapezoid integral") {
  const Grid g(100);
  CHECK(integral(field(g, [](double) { return 1.0; })) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(integral(field(g, [](double s) { return s; })) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(integral(field(g, [](double s) { return s * s; })) - 1.0 / 3.0) <= 2e-5);
}

TEST_CASE("integral is linear and monotone") {
  const Grid g(50);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(g.node_count()), b(g.node_count());
  for (std::size_t j = 0; j < a.size(); ++j) {
    a[j] = u(rng);
    b[j] = a[j] + std::abs(u(rng));
  }
  const ScalarField fa(g, a), fb(g, b);
  CHECK(integral(fa) <= integral(fb));
  CHECK(integral(2.0 * fa + fb) == doctest::Approx(2.0 * integral(fa) + integral(fb)).epsilon(1e-13));
}

TEST_CASE("norms") {
  const Grid g(200);
  const ScalarField id = field(g, [](double s) { return s; });
  CHECK(h1_seminorm(id) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(sup_norm(id) == 1.0);
  const ScalarField z = ScalarField::zeros(g);
  CHECK(l2_norm(z) == 0.0);
  CHECK(sup_norm(z) == 0.0);
  CHECK(h1_seminorm(z) == 0.0);
  const ScalarField sn = field(g, [](double s) { return std::sin(oracle::pi * s / 2); });
  CHECK(std::abs(l2_norm(sn) - std::sqrt(0.5)) <= 1e-4);
}

TEST_CASE("discrete Poincare and sup-norm inequalities for clamped fields") {
  const Grid g(100);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  const double cp = 2.0 / oracle::pi;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(g.node_count(), 0.0);
    for (std::size_t j = 1; j < v.size(); ++j) v[j] = v[j - 1] + 0.1 * u(rng);
    const ScalarField f(g, v, FieldRole::shape);
    const double h1 = h1_seminorm(f);
    CHECK(l2_norm(f) * l2_norm(f) <= cp * cp * h1 * h1 * (1.0 + 10.0 * g.spacing() * g.spacing()) + 1e-14);
    CHECK(sup_norm(f) * sup_norm(f) <= h1 * h1 + 1e-14);
  }
}

TEST_CASE("derivatives") {
  const Grid g(100);
  const double ds2 = g.spacing() * g.spacing();
  const ScalarField d = derivative(field(g, [](double s) { return s * s; }));
  for (std::size_t j = 0; j < d.size(); ++j) CHECK(std::abs(d[j] - 2.0 * g.node(j)) <= 10 * ds2);
  const ScalarField c = derivative(field(g, [](double) { return 3.0; }));
  CHECK(sup_norm(c) <= 1e-12);
  const ScalarField d2 = second_derivative_interior(field(g, [](double s) { return s * (2 - s) / 2; }));
  for (std::size_t j = 0; j < d2.size(); ++j) CHECK(std::abs(d2[j] + 1.0) <= 1e-8);
  const ScalarField ds = second_derivative_interior(field(g, [](double s) { return std::sin(s); }));
  for (std::size_t j = 0; j < ds.size(); ++j) CHECK(std::abs(ds[j] + std::sin(g.node(j))) <= 10 * ds2);
  CHECK_THROWS_AS(derivative(ScalarField::zeros(Grid(1))), Error);
  CHECK_THROWS_AS(second_derivative_interior(ScalarField::zeros(Grid(2))), Error);
}

TEST_CASE("csv round trip is exact") {
  const Grid g(37);
  const ScalarField f = field(g, [](double s) { return std::exp(s) - 1.0 + 1e-17 * s; }, FieldRole::shape);
  std::stringstream ss;
  write_csv(ss, f);
  CHECK(ss.str().rfind("s,value\n", 0) == 0);
  const ScalarField back = read_csv(ss, FieldRole::shape);
  CHECK(back.grid() == g);
  for (std::size_t j = 0; j < f.size(); ++j) CHECK(back[j] == f[j]);
}

TEST_CASE("csv reader rejects malformed input") {
  std::stringstream bad_header("x,y\n0,0\n1,1\n");
  CHECK_THROWS_AS(read_csv(bad_header), Error);
  std::stringstream nonuniform("s,value\n0,0\n0.3,1\n1,2\n");
  CHECK_THROWS_AS(read_csv(nonuniform), Error);
  std::stringstream junk("s,value\n0,0\n0.5,abc\n1,2\n");
  CHECK_THROWS_AS(read_csv(junk), Error);
}

TEST_CASE("fields on different grids do not mix") {
  CHECK_THROWS_AS(ScalarField::zeros(Grid(4)) + ScalarField::zeros(Grid(5)), Error);
}
