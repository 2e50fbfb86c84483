#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ampcs/model.hpp"

namespace ampcs {

// Per-edge message tables for the pre-reduction algorithm. Both tables are
// stored variable-major: the entry for edge (i, a) lives at [i*n + a].
struct EdgeMessages {
  int n = 0;
  int N = 0;
  std::vector<double> var_to_factor;  // x_{i->a}: message mean from variable i
  std::vector<double> factor_to_var;  // z_{a->i}: residual from factor a
  double threshold = 0.0;             // shared tau-hat
  int iter = 0;

  double x(int i, int a) const {
    return var_to_factor[static_cast<std::size_t>(i) * n + a];
  }
  double z(int a, int i) const {
    return factor_to_var[static_cast<std::size_t>(i) * n + a];
  }
};

// x messages zero, z_{a->i} = y_a, threshold = tau0 (> 0 required).
EdgeMessages mp_init(const ProblemInstance& inst, double tau0);

// One synchronous sweep: new x messages from cavity sums of the old z
// messages, threshold recursion from the full (non-cavity) sums, new z
// messages from the new x messages. Theta(nN) via full sums minus the excluded
// term, parallel over variables. Throws DegenerateThresholdError when the
// incoming threshold is at or below the machine floor.
EdgeMessages mp_step(const EdgeMessages& msgs, const ProblemInstance& inst);

// Literal per-edge reference, Theta(nN(n+N)). Serial; kept for testing and the
// kernel benchmark.
EdgeMessages mp_step_naive(const EdgeMessages& msgs,
                           const ProblemInstance& inst);

// Finite-beta sweep: the soft threshold is replaced by the family posterior
// mean and the threshold recursion averages A_ai^2 * beta * variance over all
// edges.
EdgeMessages mp_finite_beta_step(const EdgeMessages& msgs,
                                 const ProblemInstance& inst, double beta);

// Node estimate x_i = eta(sum_b A_bi z_{b->i}; tau) using all incoming
// messages.
std::vector<double> mp_estimate(const EdgeMessages& msgs,
                                const ProblemInstance& inst);

// Sup distance between the empirical CDF of `samples` and the CDF `cdf`,
// evaluated at the jump points. Throws on an empty sample set.
double kolmogorov_distance(std::span<const double> samples,
                           const std::function<double(double)>& cdf);

struct MpCompareRow {
  int t = 0;
  double max_discrepancy = 0.0;    // max_i |mp node estimate - AMP x^t|
  double median_edge_spread = 0.0; // median over support of max_a - min_a x_{i->a}
};

// Runs edge message passing and AMP side by side from matched initialization
// (x = 0, z = y, shared tau0) and compares node estimates per iteration.
// beta <= 0 selects the beta = infinity sweep. Spread is measured over the
// true-support coordinates (off-support messages are mostly exactly zero).
std::vector<MpCompareRow> compare_mp_amp(const ProblemInstance& inst,
                                         double tau0, int iters,
                                         double beta = 0.0);

}  // namespace ampcs
