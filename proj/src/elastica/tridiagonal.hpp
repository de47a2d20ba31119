// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace elastica {

/// Banded LU of a general tridiagonal matrix with partial pivoting
/// (same elimination order as LAPACK's gttrf, one extra superdiagonal of fill).
class TridiagonalLU {
 public:
  /// sub[i] = A(i+1,i), diag[i] = A(i,i), sup[i] = A(i,i+1).
  TridiagonalLU(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup);

  [[nodiscard]] std::size_t size() const noexcept { return diag_.size(); }
  /// Smallest |u_ii|; zero means the factorization broke down.
  [[nodiscard]] double min_abs_pivot() const noexcept { return min_pivot_; }
  [[nodiscard]] bool singular() const noexcept { return min_pivot_ == 0.0; }

  /// Overwrites rhs with the solution. Requires !singular().
  void solve(std::span<double> rhs) const;

 private:
  std::vector<double> lower_;  // multipliers
  std::vector<double> diag_;   // U diagonal
  std::vector<double> up1_;    // U first superdiagonal
  std::vector<double> up2_;    // U second superdiagonal (fill)
  std::vector<unsigned char> swapped_;
  double min_pivot_ = 0.0;
};

/// y = A x for the tridiagonal A given by (sub, diag, sup).
void tridiagonal_multiply(std::span<const double> sub, std::span<const double> diag,
                          std::span<const double> sup, std::span<const double> x, std::span<double> y);

}  // namespace elastica
