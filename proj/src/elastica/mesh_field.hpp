// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace elastica {

/// Uniform grid on [0,1] with nodes s_j = j / n_cells.
class Grid {
 public:
  static constexpr int default_cells = 400;

  explicit Grid(int n_cells = default_cells);

  [[nodiscard]] int n_cells() const noexcept { return n_cells_; }
  [[nodiscard]] std::size_t node_count() const noexcept { return static_cast<std::size_t>(n_cells_) + 1; }
  [[nodiscard]] double spacing() const noexcept { return 1.0 / n_cells_; }
  [[nodiscard]] double node(std::size_t j) const noexcept {
    return static_cast<double>(j) / static_cast<double>(n_cells_);
  }
  /// Composite trapezoid weight of node j.
  [[nodiscard]] double weight(std::size_t j) const noexcept {
    return (j == 0 || j == node_count() - 1) ? 0.5 * spacing() : spacing();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int n_cells_;
};

/// Fields tagged shape, design or multiplier live in H^1_{0L}: value(0) == 0.
enum class FieldRole { shape, design, multiplier, target, generic };

const char* to_string(FieldRole role) noexcept;

class ScalarField {
 public:
  ScalarField(Grid grid, std::vector<double> values, FieldRole role = FieldRole::generic);

  static ScalarField zeros(Grid grid, FieldRole role = FieldRole::generic);
  static ScalarField from_function(Grid grid, const std::function<double(double)>& f,
                                   FieldRole role = FieldRole::generic);

  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] FieldRole role() const noexcept { return role_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] double operator[](std::size_t j) const noexcept { return values_[j]; }
  [[nodiscard]] double front() const noexcept { return values_.front(); }
  [[nodiscard]] double back() const noexcept { return values_.back(); }

  /// Copy with a different role tag; re-validates the clamp invariant.
  [[nodiscard]] ScalarField with_role(FieldRole role) const;

 private:
  Grid grid_;
  std::vector<double> values_;
  FieldRole role_;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);

/// Throws invalid_argument unless both fields share a grid.
void require_same_grid(const ScalarField& a, const ScalarField& b, const char* where);

double integral(const ScalarField& f);
double integral(const Grid& grid, std::span<const double> values);
double l2_norm(const ScalarField& f);
double sup_norm(const ScalarField& f);
double sup_norm(std::span<const double> values);
/// sqrt of sum over cells of ((f_{j+1} - f_j) / ds)^2 ds.
double h1_seminorm(const ScalarField& f);

/// Central differences inside, second-order one-sided at both ends.
ScalarField derivative(const ScalarField& f);
ScalarField second_derivative_interior(const ScalarField& f);

/// CSV with header `s,value` and one row per node.
void write_csv(std::ostream& out, const ScalarField& f);
/// Reads the `s,value` format; the grid is inferred from the node column and
/// must be uniform on [0,1].
ScalarField read_csv(std::istream& in, FieldRole role = FieldRole::generic);

}  // namespace elastica
