// SPDX-License-Identifier: Apache-2.0
#include "elastica/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "elastica/errors.hpp"

namespace elastica {

TridiagonalLU::TridiagonalLU(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup)
    : lower_(std::move(sub)), diag_(std::move(diag)), up1_(std::move(sup)) {
  const std::size_t m = diag_.size();
  if (m == 0 || lower_.size() + 1 != m || up1_.size() + 1 != m) {
    throw Error(ErrorCode::invalid_argument, "TridiagonalLU: inconsistent band sizes");
  }
  up2_.assign(m > 2 ? m - 2 : 0, 0.0);
  swapped_.assign(m > 1 ? m - 1 : 0, 0);

  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (std::abs(diag_[i]) >= std::abs(lower_[i])) {
      const double fact = diag_[i] != 0.0 ? lower_[i] / diag_[i] : 0.0;
      lower_[i] = fact;
      diag_[i + 1] -= fact * up1_[i];
    } else {
      const double fact = diag_[i] / lower_[i];
      diag_[i] = lower_[i];
      lower_[i] = fact;
      const double temp = up1_[i];
      up1_[i] = diag_[i + 1];
      diag_[i + 1] = temp - fact * diag_[i + 1];
      if (i + 2 < m) {
        up2_[i] = up1_[i + 1];
        up1_[i + 1] = -fact * up1_[i + 1];
      }
      swapped_[i] = 1;
    }
  }

  min_pivot_ = std::numeric_limits<double>::infinity();
  for (double d : diag_) min_pivot_ = std::min(min_pivot_, std::abs(d));
}

void TridiagonalLU::solve(std::span<double> b) const {
  const std::size_t m = diag_.size();
  if (b.size() != m) throw Error(ErrorCode::invalid_argument, "TridiagonalLU::solve: size mismatch");
  if (singular()) throw Error(ErrorCode::singular_operator, "TridiagonalLU::solve: zero pivot");

  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (swapped_[i] == 0) {
      b[i + 1] -= lower_[i] * b[i];
    } else {
      const double temp = b[i];
      b[i] = b[i + 1];
      b[i + 1] = temp - lower_[i] * b[i];
    }
  }

  b[m - 1] /= diag_[m - 1];
  if (m > 1) b[m - 2] = (b[m - 2] - up1_[m - 2] * b[m - 1]) / diag_[m - 2];
  for (std::size_t k = m; k-- > 2;) {
    const std::size_t i = k - 2;
    b[i] = (b[i] - up1_[i] * b[i + 1] - up2_[i] * b[i + 2]) / diag_[i];
  }
}

void tridiagonal_multiply(std::span<const double> sub, std::span<const double> diag,
                          std::span<const double> sup, std::span<const double> x, std::span<double> y) {
  const std::size_t m = diag.size();
  for (std::size_t i = 0; i < m; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += sub[i - 1] * x[i - 1];
    if (i + 1 < m) v += sup[i] * x[i + 1];
    y[i] = v;
  }
}

}  // namespace elastica
