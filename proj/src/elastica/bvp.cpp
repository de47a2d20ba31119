// SPDX-License-Identifier: Apache-2.0
#include "elastica/bvp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "elastica/errors.hpp"
#include "elastica/tridiagonal.hpp"

namespace elastica {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

struct Evaluation {
  std::vector<double> f;
  std::vector<double> df;
  std::vector<double> rows;  // R_1..R_N in -v'' + f units
  double metric = 0.0;       // the bvp_residual value
  double merit = 0.0;        // sum_j w_j R_j^2
  bool finite = true;
};

Evaluation evaluate(const PointwiseSource& src, const Grid& grid, std::span<const double> v) {
  const std::size_t n = v.size();
  const double ds = grid.spacing();
  const double inv_ds2 = 1.0 / (ds * ds);
  Evaluation e;
  e.f.resize(n);
  e.df.resize(n);
  e.rows.assign(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    const SourceValue sv = src.eval(j, v[j]);
    e.f[j] = sv.value;
    e.df[j] = sv.dv;
    if (!std::isfinite(sv.value) || !std::isfinite(sv.dv)) e.finite = false;
  }
  double interior = 0.0;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    e.rows[j] = (2.0 * v[j] - v[j - 1] - v[j + 1]) * inv_ds2 + e.f[j];
    interior = std::max(interior, std::abs(e.rows[j]));
  }
  const std::size_t last = n - 1;
  e.rows[last] = 2.0 * (v[last] - v[last - 1]) * inv_ds2 + e.f[last];
  const double end_slope = (v[last] - v[last - 1]) / ds + 0.5 * ds * e.f[last];
  e.metric = interior + std::abs(v[0]) + std::abs(end_slope);
  for (std::size_t j = 1; j < n; ++j) e.merit += grid.weight(j) * e.rows[j] * e.rows[j];
  if (!std::isfinite(e.metric) || !std::isfinite(e.merit)) e.finite = false;
  return e;
}

/// Residual level below which the second difference is dominated by rounding.
double roundoff_floor(const Grid& grid, std::span<const double> v, std::span<const double> f) {
  const double ds = grid.spacing();
  return 16.0 * eps * sup_norm(v) / (ds * ds) + 8.0 * eps * sup_norm(f);
}

/// Jacobian of rows 1..N as a tridiagonal matrix in the unknowns v_1..v_N.
TridiagonalLU factor_operator(const Grid& grid, std::span<const double> potential) {
  const std::size_t m = static_cast<std::size_t>(grid.n_cells());
  const double inv_ds2 = 1.0 / (grid.spacing() * grid.spacing());
  std::vector<double> sub(m - 1, -inv_ds2);
  std::vector<double> diag(m);
  std::vector<double> sup(m - 1, -inv_ds2);
  for (std::size_t i = 0; i < m; ++i) diag[i] = 2.0 * inv_ds2 + potential[i + 1];
  if (m >= 2) sub[m - 2] = -2.0 * inv_ds2;
  return TridiagonalLU(std::move(sub), std::move(diag), std::move(sup));
}

std::vector<double> dir_values(const Grid& grid, std::span<const double> g) {
  const std::size_t n = g.size();
  const double ds = grid.spacing();
  // flux[j] approximates int_{s_{j-1/2}}^1 g for j = 1..N
  std::vector<double> flux(n, 0.0);
  flux[n - 1] = 0.5 * ds * g[n - 1];
  for (std::size_t j = n - 1; j-- > 1;) flux[j] = flux[j + 1] + ds * g[j];
  std::vector<double> v(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) v[j] = v[j - 1] + ds * flux[j];
  return v;
}

struct NewtonOutcome {
  bool converged = false;
  int iterations = 0;
};

NewtonOutcome newton(const PointwiseSource& src, const SolveOptions& opts, const Grid& grid,
                     std::vector<double>& v, Evaluation& e) {
  NewtonOutcome out;
  const std::size_t m = static_cast<std::size_t>(grid.n_cells());
  for (int it = 0; it < opts.max_newton; ++it) {
    if (!e.finite) return out;
    const double accept = std::max(opts.tol_residual, roundoff_floor(grid, v, e.f));
    const bool done = e.metric <= accept;

    TridiagonalLU lu = factor_operator(grid, e.df);
    if (lu.singular()) return out;
    std::vector<double> step(m);
    for (std::size_t i = 0; i < m; ++i) step[i] = -e.rows[i + 1];
    lu.solve(step);

    bool accepted = false;
    double t = 1.0;
    std::vector<double> trial(v.size());
    for (int h = 0; h <= opts.max_halvings; ++h) {
      trial[0] = 0.0;
      for (std::size_t i = 0; i < m; ++i) trial[i + 1] = v[i + 1] + t * step[i];
      Evaluation te = evaluate(src, grid, trial);
      if (te.finite && (te.merit < e.merit || (done && te.metric <= e.metric))) {
        v.swap(trial);
        e = std::move(te);
        accepted = true;
        break;
      }
      if (done) break;  // polishing step only; keep the converged iterate
      t *= opts.damping;
    }
    ++out.iterations;
    if (done) {
      out.converged = true;
      return out;
    }
    if (!accepted) {
      // Stagnation at rounding level still counts as converged.
      out.converged = e.metric <= accept;
      return out;
    }
  }
  out.converged = e.finite && e.metric <= std::max(opts.tol_residual, roundoff_floor(grid, v, e.f));
  return out;
}

}  // namespace

void SolveOptions::validate() const {
  if (!(tol_residual > 0.0)) throw Error(ErrorCode::invalid_argument, "SolveOptions: tol_residual must be > 0");
  if (max_newton < 1) throw Error(ErrorCode::invalid_argument, "SolveOptions: max_newton must be >= 1");
  if (!(damping > 0.0 && damping < 1.0)) throw Error(ErrorCode::invalid_argument, "SolveOptions: damping in (0,1)");
}

double bvp_residual(const PointwiseSource& src, const ScalarField& v) {
  if (v.size() < 3) throw Error(ErrorCode::grid_too_coarse, "bvp_residual: needs n_cells >= 2");
  return evaluate(src, v.grid(), v.values()).metric;
}

ScalarField solve_nonlinear_bvp(const PointwiseSource& src, const SolveOptions& opts,
                                const ScalarField& initial, SolveStats* stats) {
  opts.validate();
  const Grid grid = initial.grid();
  if (grid.n_cells() < 2) throw Error(ErrorCode::grid_too_coarse, "solve_nonlinear_bvp: needs n_cells >= 2");

  std::vector<double> v(initial.values().begin(), initial.values().end());
  v[0] = 0.0;
  Evaluation e = evaluate(src, grid, v);
  if (!e.finite) throw Error(ErrorCode::non_finite_value, "solve_nonlinear_bvp: source not finite at initial guess");

  SolveStats local;
  NewtonOutcome nt = newton(src, opts, grid, v, e);
  local.newton_iterations += nt.iterations;

  if (!nt.converged && opts.picard_fallback) {
    if (!e.finite) {
      v.assign(v.size(), 0.0);
      e = evaluate(src, grid, v);
    }
    std::vector<double> best = v;
    double best_metric = e.metric;
    for (int it = 0; it < opts.max_picard; ++it) {
      std::vector<double> neg_f(v.size());
      for (std::size_t j = 0; j < v.size(); ++j) neg_f[j] = -e.f[j];
      v = dir_values(grid, neg_f);
      e = evaluate(src, grid, v);
      ++local.picard_iterations;
      if (!e.finite) break;
      if (e.metric < best_metric) {
        best = v;
        best_metric = e.metric;
      }
      if (e.metric <= std::max(opts.tol_residual, roundoff_floor(grid, v, e.f))) break;
    }
    v = best;
    e = evaluate(src, grid, v);
    nt = newton(src, opts, grid, v, e);
    local.newton_iterations += nt.iterations;
  }

  local.residual = e.metric;
  if (stats != nullptr) *stats = local;
  if (!e.finite) throw Error(ErrorCode::non_finite_value, "solve_nonlinear_bvp: iterate became non-finite");
  if (!nt.converged) {
    throw NonConvergence("solve_nonlinear_bvp: no convergence, residual " + std::to_string(e.metric), e.metric);
  }
  return ScalarField(grid, std::move(v), initial.role());
}

ScalarField solve_linear_bvp(const ScalarField& q, const ScalarField& rhs) {
  require_same_grid(q, rhs, "solve_linear_bvp");
  const Grid grid = q.grid();
  if (grid.n_cells() < 2) throw Error(ErrorCode::grid_too_coarse, "solve_linear_bvp: needs n_cells >= 2");
  const std::size_t m = static_cast<std::size_t>(grid.n_cells());
  const double ds = grid.spacing();
  const double singular_tol = 10.0 * ds * ds;

  TridiagonalLU lu = factor_operator(grid, q.values());
  if (lu.singular()) throw Error(ErrorCode::singular_operator, "solve_linear_bvp: operator is singular");

  // Inverse iteration in the trapezoid-weighted inner product, in which the
  // operator is self-adjoint: ||x|| / ||A^{-1} x|| bounds |mu_min| from above.
  auto wnorm = [&](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += grid.weight(i + 1) * x[i] * x[i];
    return std::sqrt(s);
  };
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = grid.node(i + 1);
    x[i] = s * (2.0 - s) + 0.25 * std::sin(7.3 * static_cast<double>(i + 1)) + 0.1 * std::cos(0.37 * (i + 1));
  }
  double estimate = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 8; ++it) {
    const double before = wnorm(x);
    lu.solve(x);
    const double after = wnorm(x);
    if (!std::isfinite(after) || after == 0.0) break;
    estimate = std::min(estimate, before / after);
    for (double& xi : x) xi /= after;
  }
  if (estimate < singular_tol) {
    throw Error(ErrorCode::singular_operator,
                "solve_linear_bvp: operator numerically singular (|mu_min| ~ " + std::to_string(estimate) + ")");
  }

  std::vector<double> b(rhs.values().begin() + 1, rhs.values().end());
  std::vector<double> u(b);
  lu.solve(u);

  // One step of iterative refinement.
  const double inv_ds2 = 1.0 / (ds * ds);
  std::vector<double> sub(m - 1, -inv_ds2), diag(m), sup(m - 1, -inv_ds2);
  for (std::size_t i = 0; i < m; ++i) diag[i] = 2.0 * inv_ds2 + q[i + 1];
  sub[m - 2] = -2.0 * inv_ds2;
  std::vector<double> au(m);
  tridiagonal_multiply(sub, diag, sup, u, au);
  std::vector<double> corr(m);
  for (std::size_t i = 0; i < m; ++i) corr[i] = b[i] - au[i];
  lu.solve(corr);
  for (std::size_t i = 0; i < m; ++i) u[i] += corr[i];

  std::vector<double> out(m + 1, 0.0);
  std::copy(u.begin(), u.end(), out.begin() + 1);
  for (double value : out) {
    if (!std::isfinite(value)) throw Error(ErrorCode::non_finite_value, "solve_linear_bvp: non-finite solution");
  }
  return ScalarField(grid, std::move(out));
}

ScalarField double_integral_representation(const ScalarField& g) {
  if (g.size() < 2) throw Error(ErrorCode::grid_too_coarse, "double_integral_representation: grid too coarse");
  return ScalarField(g.grid(), dir_values(g.grid(), g.values()));
}

namespace {

/// Number of eigenvalues of the symmetric tridiagonal (a, b) below x.
int sturm_count(std::span<const double> a, std::span<const double> b, double x) {
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double off = i > 0 ? b[i - 1] * b[i - 1] : 0.0;
    d = a[i] - x - (i > 0 ? off / d : 0.0);
    if (d == 0.0) d = -eps * (std::abs(a[i]) + std::abs(x) + 1.0);
    if (d < 0.0) ++count;
  }
  return count;
}

}  // namespace

SLSpectrum sl_eigen(const ScalarField& q, const ScalarField& w, int k) {
  require_same_grid(q, w, "sl_eigen");
  const Grid grid = q.grid();
  if (grid.n_cells() < 2) throw Error(ErrorCode::grid_too_coarse, "sl_eigen: needs n_cells >= 2");
  const std::size_t m = static_cast<std::size_t>(grid.n_cells());
  if (k < 1 || static_cast<std::size_t>(k) > m) {
    throw Error(ErrorCode::invalid_argument, "sl_eigen: k must be in [1, n_cells]");
  }
  for (double wj : w.values()) {
    if (!(wj > 0.0)) throw Error(ErrorCode::invalid_weight, "sl_eigen: weight must be positive at every node");
  }

  // Symmetric pencil (S, B) with S = K + W diag(q), B = W diag(w), reduced to
  // C = B^{-1/2} S B^{-1/2}.
  const double ds = grid.spacing();
  std::vector<double> a(m), b(m - 1), bw(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + 1;
    const double wq = grid.weight(j);
    const double stiff = (j == m) ? 1.0 / ds : 2.0 / ds;
    bw[i] = wq * w[j];
    a[i] = (stiff + wq * q[j]) / bw[i];
  }
  for (std::size_t i = 0; i + 1 < m; ++i) b[i] = (-1.0 / ds) / std::sqrt(bw[i] * bw[i + 1]);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double r = (i > 0 ? std::abs(b[i - 1]) : 0.0) + (i + 1 < m ? std::abs(b[i]) : 0.0);
    lo = std::min(lo, a[i] - r);
    hi = std::max(hi, a[i] + r);
  }

  SLSpectrum spec;
  spec.eigenvalues.reserve(static_cast<std::size_t>(k));
  for (int idx = 1; idx <= k; ++idx) {
    double left = lo;
    double right = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (left + right);
      if (sturm_count(a, b, mid) >= idx) {
        right = mid;
      } else {
        left = mid;
      }
      if (right - left <= 4.0 * eps * std::max(std::abs(left), std::abs(right))) break;
    }
    spec.eigenvalues.push_back(0.5 * (left + right));
  }
  spec.dist_to_one = std::numeric_limits<double>::infinity();
  for (double mu : spec.eigenvalues) spec.dist_to_one = std::min(spec.dist_to_one, std::abs(mu - 1.0));
  return spec;
}

double poincare_constant_check(const Grid& grid) {
  const ScalarField zero = ScalarField::zeros(grid);
  const ScalarField one = ScalarField::from_function(grid, [](double) { return 1.0; });
  return sl_eigen(zero, one, 1).eigenvalues.front();
}

}  // namespace elastica
