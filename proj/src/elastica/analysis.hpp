// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "elastica/bvp.hpp"
#include "elastica/magnetoelastica.hpp"
#include "elastica/shape_programmer.hpp"

namespace elastica {

// Target presets.
ScalarField preset_zero(const Grid& grid);
/// a s (2 - s) / 2.
ScalarField preset_parabolic(const Grid& grid, double a);
/// (pi/2) sin(pi s / 2): smooth ramp from 0 to a quarter turn with zero end slope.
ScalarField preset_quarter_turn(const Grid& grid);

/// Largest |target''| seen by the attainability construction (central
/// differences inside, ghost closure at s = 1, one-sided at s = 0).
double max_target_curvature(const ScalarField& target);

struct AttainableDesign {
  Control control;
  ScalarField alpha;
};

/// h = H (cos psi, sin psi), alpha = asin(target''/H) - target + psi with
/// psi = -asin(target''(0)/H). Throws HTooSmall unless H > max|target''|.
AttainableDesign attainable_design(const ScalarField& target, double H);

/// Complete elliptic integral of the first kind by the AGM.
double complete_elliptic_K(double k);

/// Incomplete integral F(phi, k) by adaptive Simpson quadrature.
double incomplete_elliptic_F(double phi, double k);

/// Tip rotation of the first buckled branch at field (-H, 0): K(sin(theta1/2)) = sqrt(H).
double bifurcation_tip(double H);

struct BranchPoint {
  double H = 0.0;
  double theta1 = 0.0;
  ScalarField profile;
};

BranchPoint bifurcation_profile(double H, const Grid& grid);

enum class Verdict { regular, resonant };
const char* to_string(Verdict v) noexcept;

struct RegularityReport {
  SLSpectrum spectrum;
  Verdict verdict = Verdict::regular;
  double tolerance = 0.0;         ///< 10 ds^2
  bool sufficient_condition = false;  ///< |h| < pi^2/4
};

/// Spectrum of -u'' + (r^- + 1) u = mu (r^+ + 1) u with r = h.D^2m(alpha + theta).
RegularityReport regularity_check(const Control& h, const ScalarField& alpha, const ScalarField& theta, int k = 4);

struct SweepRow {
  double epsilon = 0.0;
  double cost = 0.0;
  double attainment_error = 0.0;
  SolveStatus status = SolveStatus::converged;
  bool contraction_lost = false;
  double inner_contraction = 0.0;
  std::string message;
};

/// Runs the nested scheme at epsilon = gamma for each entry; rows are independent.
std::vector<SweepRow> epsilon_sweep(const ScalarField& target, const std::vector<double>& epsilons,
                                    const ProblemSpec& base = {});

/// `H,theta1` rows.
void write_branch_csv(std::ostream& out, const std::vector<std::pair<double, double>>& rows);
/// `epsilon,cost,attainment_error,status` rows.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace elastica
