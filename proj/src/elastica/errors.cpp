// SPDX-License-Identifier: Apache-2.0
#include "elastica/errors.hpp"

namespace elastica {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::grid_too_coarse: return "GridTooCoarse";
    case ErrorCode::non_finite_value: return "NonFiniteValue";
    case ErrorCode::non_convergence: return "NonConvergence";
    case ErrorCode::singular_operator: return "SingularOperator";
    case ErrorCode::invalid_weight: return "InvalidWeight";
    case ErrorCode::h_too_small: return "HTooSmall";
    case ErrorCode::boundary_mismatch: return "BoundaryMismatch";
    case ErrorCode::no_nontrivial_branch: return "NoNontrivialBranch";
    case ErrorCode::max_iterations: return "MaxIterations";
    case ErrorCode::resonant: return "Resonant";
    case ErrorCode::line_search_failure: return "LineSearchFailure";
    case ErrorCode::io_failure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace elastica
