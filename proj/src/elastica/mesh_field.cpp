// SPDX-License-Identifier: Apache-2.0
#include "elastica/mesh_field.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "elastica/errors.hpp"

namespace elastica {

namespace {

constexpr double clamp_tolerance = 1e-12;

bool is_clamped_role(FieldRole role) {
  return role == FieldRole::shape || role == FieldRole::design || role == FieldRole::multiplier;
}

}  // namespace

Grid::Grid(int n_cells) : n_cells_(n_cells) {
  if (n_cells < 1) throw Error(ErrorCode::invalid_argument, "Grid: n_cells must be positive");
}

const char* to_string(FieldRole role) noexcept {
  switch (role) {
    case FieldRole::shape: return "shape";
    case FieldRole::design: return "design";
    case FieldRole::multiplier: return "multiplier";
    case FieldRole::target: return "target";
    case FieldRole::generic: return "generic";
  }
  return "generic";
}

ScalarField::ScalarField(Grid grid, std::vector<double> values, FieldRole role)
    : grid_(grid), values_(std::move(values)), role_(role) {
  if (values_.size() != grid_.node_count()) {
    throw Error(ErrorCode::invalid_argument,
                "ScalarField: expected " + std::to_string(grid_.node_count()) + " values, got " +
                    std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::non_finite_value, "ScalarField: non-finite value");
  }
  if (is_clamped_role(role_) && std::abs(values_.front()) > clamp_tolerance) {
    throw Error(ErrorCode::boundary_mismatch,
                std::string("ScalarField: ") + to_string(role_) + " field must vanish at s = 0");
  }
}

ScalarField ScalarField::zeros(Grid grid, FieldRole role) {
  return ScalarField(grid, std::vector<double>(grid.node_count(), 0.0), role);
}

ScalarField ScalarField::from_function(Grid grid, const std::function<double(double)>& f,
                                       FieldRole role) {
  std::vector<double> v(grid.node_count());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.node(j));
  return ScalarField(grid, std::move(v), role);
}

ScalarField ScalarField::with_role(FieldRole role) const { return ScalarField(grid_, values_, role); }

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* where) {
  if (!(a.grid() == b.grid())) {
    throw Error(ErrorCode::invalid_argument, std::string(where) + ": fields live on different grids");
  }
}

namespace {

template <typename Op>
ScalarField combine(const ScalarField& a, const ScalarField& b, Op op) {
  require_same_grid(a, b, "ScalarField arithmetic");
  std::vector<double> v(a.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = op(a[j], b[j]);
  return ScalarField(a.grid(), std::move(v));
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return x + y; });
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return combine(a, b, [](double x, double y) { return x - y; });
}

ScalarField operator*(double c, const ScalarField& a) {
  std::vector<double> v(a.values().begin(), a.values().end());
  for (double& x : v) x *= c;
  return ScalarField(a.grid(), std::move(v));
}

double integral(const Grid& grid, std::span<const double> values) {
  const std::size_t n = values.size();
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t j = 1; j + 1 < n; ++j) sum += values[j];
  return sum * grid.spacing();
}

double integral(const ScalarField& f) { return integral(f.grid(), f.values()); }

double l2_norm(const ScalarField& f) {
  std::vector<double> sq(f.size());
  for (std::size_t j = 0; j < sq.size(); ++j) sq[j] = f[j] * f[j];
  return std::sqrt(integral(f.grid(), sq));
}

double sup_norm(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double sup_norm(const ScalarField& f) { return sup_norm(f.values()); }

double h1_seminorm(const ScalarField& f) {
  const double ds = f.grid().spacing();
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < f.size(); ++j) {
    const double d = f[j + 1] - f[j];
    sum += d * d;
  }
  return std::sqrt(sum / ds);
}

ScalarField derivative(const ScalarField& f) {
  const std::size_t n = f.size();
  if (n < 3) throw Error(ErrorCode::grid_too_coarse, "derivative: needs n_cells >= 2");
  const double ds = f.grid().spacing();
  std::vector<double> d(n);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * ds);
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (f[j + 1] - f[j - 1]) / (2.0 * ds);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * ds);
  return ScalarField(f.grid(), std::move(d));
}

ScalarField second_derivative_interior(const ScalarField& f) {
  const std::size_t n = f.size();
  if (n < 4) throw Error(ErrorCode::grid_too_coarse, "second_derivative_interior: needs n_cells >= 3");
  const double ds2 = f.grid().spacing() * f.grid().spacing();
  std::vector<double> d(n);
  d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / ds2;
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (f[j - 1] - 2.0 * f[j] + f[j + 1]) / ds2;
  d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / ds2;
  return ScalarField(f.grid(), std::move(d));
}

void write_csv(std::ostream& out, const ScalarField& f) {
  out << "s,value\n";
  out << std::setprecision(17);
  for (std::size_t j = 0; j < f.size(); ++j) out << f.grid().node(j) << ',' << f[j] << '\n';
}

ScalarField read_csv(std::istream& in, FieldRole role) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::io_failure, "read_csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "s,value") throw Error(ErrorCode::io_failure, "read_csv: expected header 's,value'");

  std::vector<double> nodes;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::io_failure, "read_csv: malformed row '" + line + "'");
    try {
      nodes.push_back(std::stod(line.substr(0, comma)));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::io_failure, "read_csv: malformed row '" + line + "'");
    }
  }
  if (nodes.size() < 2) throw Error(ErrorCode::io_failure, "read_csv: need at least two rows");

  const Grid grid(static_cast<int>(nodes.size() - 1));
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (std::abs(nodes[j] - grid.node(j)) > 1e-9) {
      throw Error(ErrorCode::io_failure, "read_csv: nodes are not a uniform grid on [0,1]");
    }
  }
  return ScalarField(grid, std::move(values), role);
}

}  // namespace elastica
