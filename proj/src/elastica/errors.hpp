// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace elastica {

enum class ErrorCode {
  invalid_argument,
  grid_too_coarse,
  non_finite_value,
  non_convergence,
  singular_operator,
  invalid_weight,
  h_too_small,
  boundary_mismatch,
  no_nontrivial_branch,
  max_iterations,
  resonant,
  line_search_failure,
  io_failure,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Newton and the Picard fallback both stalled; carries the last residual sup-norm.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double last_residual)
      : Error(ErrorCode::non_convergence, what), last_residual_(last_residual) {}
  [[nodiscard]] double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace elastica
