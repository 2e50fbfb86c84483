#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ampcs {

enum class Ensemble { Rademacher, Gaussian };
enum class AmplitudeModel { PlusMinusOne, GaussianNonzeros };
enum class SolverKind { AmpBp, AmpLasso, AmpBayes, Ista, Fista, EdgeMp };

struct SensingMatrix {
  int rows = 0;  // n measurements
  int cols = 0;  // N unknowns
  Ensemble ensemble = Ensemble::Rademacher;
  std::vector<double> entries;  // row-major, rows * cols

  double operator()(int a, int i) const {
    return entries[static_cast<std::size_t>(a) * cols + i];
  }
  double& operator()(int a, int i) {
    return entries[static_cast<std::size_t>(a) * cols + i];
  }
};

struct SparseSignal {
  std::vector<double> values;
  int sparsity = 0;
  AmplitudeModel amplitude = AmplitudeModel::PlusMinusOne;
};

struct ProblemInstance {
  SensingMatrix matrix;
  SparseSignal signal;
  std::vector<double> measurements;  // y = A s + w
  double noise_std = 0.0;
};

struct ExperimentConfig {
  int N = 0;
  int n = 0;
  int k = 0;
  Ensemble ensemble = Ensemble::Rademacher;
  AmplitudeModel amplitude = AmplitudeModel::PlusMinusOne;
  double sigma = 0.0;
  double lambda = 0.0;
  SolverKind solver = SolverKind::AmpBp;
  int max_iters = 200;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  int trials = 1;
  double tau0 = 0.0;       // 0 = scale-matched default ||y||_2 / sqrt(n)
  double prior_eps = 0.1;  // Bayes solver prior parameters
  double prior_var = 1.0;
  double noise_var = -1.0;  // Bayes effective noise; < 0 means use sigma^2
};

struct TrialRecord {
  std::uint64_t seed = 0;
  int trial_index = 0;
  int iterations_used = 0;
  std::vector<double> per_iteration_mse;  // ||x^t - s_o||^2 / N
  double final_rel_error = 0.0;           // ||x - s_o|| / ||s_o||
  double final_objective = 0.0;
  std::vector<double> threshold_trajectory;
  bool converged = false;
};

// Throws ConfigError unless 0 < k <= n < N, max_iters >= 1, tol > 0,
// trials >= 1, sigma >= 0, lambda >= 0.
void validate_config(const ExperimentConfig& cfg);

// Deterministic function of (cfg.seed, trial_index). Draw order: matrix
// entries row-major, then the size-k support (partial Fisher-Yates), then the
// nonzero amplitudes, then the noise. Accepts k = 0 (zero signal); throws
// ConfigError for k > n, k < 0, n < 1 or n >= N.
ProblemInstance generate_instance(const ExperimentConfig& cfg, int trial_index);

double undersampling_ratio(const ProblemInstance& inst);

std::string instance_to_json(const ProblemInstance& inst,
                             const ExperimentConfig& cfg, int trial_index);

struct LoadedInstance {
  ProblemInstance instance;
  ExperimentConfig config;
  int trial_index = 0;
};
LoadedInstance instance_from_json(const std::string& text);

}  // namespace ampcs
