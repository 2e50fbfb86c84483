#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ampcs/denoisers.hpp"
#include "ampcs/model.hpp"

namespace ampcs {

struct LassoSolution {
  std::vector<double> x;
  double objective = 0.0;  // lambda ||x||_1 + 1/2 ||y - Ax||_2^2
  int iterations = 0;
  double kkt_residual = 0.0;
};

double lasso_objective(const ProblemInstance& inst, std::span<const double> x,
                       double lambda);

// Max subgradient violation: |c_i - lambda sign(x_i)| on the support,
// (|c_i| - lambda)_+ off it, with c = A^T (y - Ax). Recomputed from scratch,
// independent of any solver loop.
double lasso_kkt_residual(const ProblemInstance& inst,
                          std::span<const double> x, double lambda);

// Proximal gradient with momentum; step 1 / L with L from power iteration on
// A^T A. Stops when the KKT residual reaches tol. on_iterate, when set, is
// called with (iteration, x) after every step.
LassoSolution fista_lasso(
    const ProblemInstance& inst, double lambda, double tol = 1e-10,
    int max_iters = 20000,
    const std::function<void(int, std::span<const double>)>& on_iterate = {});

// Cyclic coordinate minimization with exact per-coordinate updates; second,
// independent route to the same optimum.
LassoSolution coordinate_descent_lasso(const ProblemInstance& inst,
                                       double lambda, double tol = 1e-10,
                                       int max_iters = 20000);

// Exact minimizer of ||s||_1 subject to A s = y by enumeration of basic
// solutions. Requires N <= 12 and n <= 6; subsets with reciprocal condition
// number below 1e-10 are skipped; ties go to the lexicographically smallest
// support. Throws InfeasibleError when no nonsingular subset reproduces y.
std::vector<double> exhaustive_l1(const ProblemInstance& inst);

// Adaptive Gauss-Kronrod moments of exp(log_density) over [lo, hi]. The two
// half-lines (lo, 0) and (0, hi) are integrated separately to respect a kink
// at the origin. break_points seed additional splits with a graded mesh of
// width feature_scale around each, so narrow interior peaks are never stepped
// over (feature_scale 0 = (hi - lo) / 1024). Throws QuadratureError with the
// achieved tolerance if refinement stalls.
Moments quadrature_moments(const std::function<double(double)>& log_density,
                           double lo, double hi, double abs_tol = 1e-10,
                           std::vector<double> break_points = {},
                           double feature_scale = 0.0);

// Quadrature-backed counterparts used as test oracles and by the CLI.
Moments f_beta_moments_quadrature(const LaplaceGaussianFamily& fam);
Moments posterior_moments_quadrature(const Prior& prior, double x,
                                     double noise_var);

}  // namespace ampcs
