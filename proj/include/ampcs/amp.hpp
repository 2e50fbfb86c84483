#pragma once

#include <cstdint>

#include "ampcs/denoisers.hpp"
#include "ampcs/model.hpp"

namespace ampcs {

struct AmpState {
  std::vector<double> x;   // current estimate, length N
  std::vector<double> z;   // corrected residual, length n
  double threshold = 0.0;  // tau-hat (basis pursuit) or gamma (lasso/bayes)
  int t = 0;
  double last_mean_deriv = 0.0;
};

enum class AmpVariant { BasisPursuit, Lasso, Bayes };

struct SolverOptions {
  AmpVariant variant = AmpVariant::BasisPursuit;
  double lambda = 0.0;  // lasso weight; bayes: known noise variance
  Prior prior;          // bayes only
  int max_iters = 200;
  double tol = 1e-8;  // relative change ||x' - x|| / max(||x||, 1e-12)
  double tau0 = 0.0;  // 0 = scale-matched default
  bool record_trajectory = true;
  bool onsager = true;        // false = plain iterative soft thresholding
  bool lagged_deriv = false;  // residual correction uses the previous <eta'>
  std::uint64_t seed = 0;     // echoed into the TrialRecord
  int trial_index = 0;
};

// ||y||_2 / sqrt(n); falls back to 1 when y = 0 so the first step is defined.
double default_tau0(const ProblemInstance& inst);

AmpState amp_init(const ProblemInstance& inst, double tau0);

// One iteration each. All three compute, in order: pseudo-data u = A^T z + x,
// the denoised estimate, the averaged derivative, the threshold recursion and
// the corrected residual (Onsager term uses the fresh derivative average and
// the previous residual). They throw DegenerateThresholdError (bp/lasso) or
// DegenerateNoiseError (bayes) when the incoming effective threshold is at or
// below the machine floor.
AmpState amp_bp_step(const AmpState& state, const ProblemInstance& inst,
                     bool onsager = true);
AmpState amp_lasso_step(const AmpState& state, const ProblemInstance& inst,
                        double lambda, bool onsager = true,
                        bool lagged_deriv = false);
AmpState amp_bayes_step(const AmpState& state, const ProblemInstance& inst,
                        const Prior& prior, double noise_var);

TrialRecord run_solver(const ProblemInstance& inst, const SolverOptions& opts);

}  // namespace ampcs
